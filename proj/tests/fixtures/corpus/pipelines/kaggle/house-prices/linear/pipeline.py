import pandas as pd
from sklearn.linear_model import LinearRegression


def add_income(frame, hoods):
    return pd.merge(frame, hoods, on='Neighborhood')


houses = pd.read_csv('houses.csv')
hoods = pd.read_csv('neighborhoods.csv')
data = add_income(houses, hoods)
reg = LinearRegression()
reg.fit(data[['LotArea', 'median_income']], data['SalePrice'])
