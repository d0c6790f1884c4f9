import pandas as pd
from sklearn.model_selection import train_test_split
from sklearn.ensemble import RandomForestClassifier
from sklearn.metrics import accuracy_score

# load the titanic training data
df = pd.read_csv('train.csv')
df['NormalizedAge'] = df['Age'] / df['Age'].max()
print(df.head())
X = df[['Pclass', 'NormalizedAge']]
y = df['Survived']
X_train, X_test, y_train, y_test = train_test_split(X, y, test_size=0.2)
clf = RandomForestClassifier(100)
clf.fit(X_train, y_train)
y_pred = clf.predict(X_test)
print(accuracy_score(y_test, y_pred))
