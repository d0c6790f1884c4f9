import pandas as pd
from sklearn.linear_model import LogisticRegression

heart = pd.read_csv('heart.csv')
for col in ['chol', 'trestbps']:
    heart[col] = heart[col].fillna(heart[col].mean())
if heart['age'].max() > 60:
    heart = heart.dropna()
model = LogisticRegression(C=0.5)
model.fit(heart[['age', 'chol', 'trestbps']], heart['target'])
