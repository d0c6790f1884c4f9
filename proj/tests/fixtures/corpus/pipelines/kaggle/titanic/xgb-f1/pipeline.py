import pandas as pd
import xgboost as xgb
from sklearn.metrics import f1_score

train = pd.read_csv('train.csv')
test = pd.read_csv('test.csv')
X = train[['Pclass', 'Fare']]
model = xgb.XGBClassifier(n_estimators=300, max_depth=4)
model.fit(X, train['Survived'])
preds = model.predict(X)
print(f1_score(train['Survived'], preds))
