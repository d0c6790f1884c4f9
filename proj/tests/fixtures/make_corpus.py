"""Regenerates tests/fixtures/corpus: 10 tables in 5 datasets plus 8 pipelines."""
import csv
import json
import random
from pathlib import Path

ROOT = Path(__file__).parent / "corpus"
rng = random.Random(11)

FIRST = ["James", "Mary", "John", "Patricia", "Robert", "Jennifer", "Michael", "Linda", "William", "Elizabeth",
         "David", "Barbara", "Richard", "Susan", "Joseph", "Jessica", "Thomas", "Sarah", "Charles", "Karen"]
LAST = ["Smith", "Johnson", "Williams", "Brown", "Jones", "Garcia", "Miller", "Davis", "Wilson", "Taylor"]
CITIES = ["London", "Paris", "Berlin", "Madrid", "Rome", "Vienna", "Dublin", "Lisbon", "Prague", "Oslo"]
COUNTRIES = ["France", "Germany", "Spain", "Italy", "Austria", "Ireland", "Portugal", "Norway"]
PRODUCTS = ["wireless mouse", "usb keyboard", "laptop stand", "desk lamp", "office chair", "monitor arm",
            "phone charger", "notebook pack", "water bottle", "backpack"]
HOODS = ["NAmes", "CollgCr", "OldTown", "Edwards", "Somerst", "Gilbert", "Sawyer", "NridgHt"]


def name():
    return f"{rng.choice(LAST)}, {rng.choice(FIRST)}"


def write_table(dataset, table, header, rows):
    path = ROOT / "data" / "kaggle" / dataset / table
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def titanic():
    header = ["PassengerId", "Survived", "Pclass", "Name", "Sex", "Age", "Fare", "Embarked"]
    rows = []
    for i in range(1, 41):
        age = "" if i % 9 == 0 else str(rng.randint(1, 70))
        rows.append([i, rng.choice(["0", "1"]), rng.choice([1, 2, 3]), name(), rng.choice(["male", "female"]), age,
                     f"{rng.uniform(5, 250):.2f}", rng.choice(["S", "C", "Q"])])
    write_table("titanic", "train.csv", header, rows)
    rows = [[100 + i, rng.choice([1, 2, 3]), name(), rng.choice(["male", "female"]), rng.randint(1, 70),
             f"{rng.uniform(5, 250):.2f}", rng.choice(["S", "C", "Q"])] for i in range(30)]
    write_table("titanic", "test.csv", [h for h in header if h != "Survived"], rows)


def heart():
    rows = [[rng.randint(29, 77), rng.choice(["0", "1"]), rng.randint(0, 3), rng.randint(94, 200),
             rng.randint(126, 564), rng.choice(["0", "1"])] for _ in range(40)]
    write_table("heart-disease", "heart.csv", ["age", "sex", "cp", "trestbps", "chol", "target"], rows)
    rows = [[f"P{1000 + i}", name(), rng.choice(CITIES), rng.randint(29, 77)] for i in range(30)]
    write_table("heart-disease", "patients.csv", ["patient_id", "name", "city", "age"], rows)


def houses():
    rows = [[i, rng.randint(1300, 21000), rng.randint(1880, 2010), rng.randint(35000, 750000), rng.choice(HOODS)]
            for i in range(1, 41)]
    write_table("house-prices", "houses.csv", ["Id", "LotArea", "YearBuilt", "SalePrice", "Neighborhood"], rows)
    rows = [[h, rng.choice(CITIES), rng.randint(30000, 120000)] for h in HOODS]
    write_table("house-prices", "neighborhoods.csv", ["Neighborhood", "city", "median_income"], rows)


def retail():
    rows = [[f"C{200 + i}", name(), rng.choice(COUNTRIES), f"2021-{rng.randint(1, 12):02d}-{rng.randint(1, 28):02d}"]
            for i in range(30)]
    write_table("retail", "customers.csv", ["customer_id", "name", "country", "signup_date"], rows)
    rows = [[f"O{5000 + i}", f"C{200 + rng.randint(0, 29)}", f"{rng.uniform(3, 400):.2f}",
             f"2022-{rng.randint(1, 12):02d}-{rng.randint(1, 28):02d}"] for i in range(40)]
    write_table("retail", "orders.csv", ["order_id", "customer_id", "amount", "order_date"], rows)
    rows = [[f"SKU{i:03d}", p, f"{rng.uniform(5, 120):.2f}", rng.choice(["true", "false"])]
            for i, p in enumerate(PRODUCTS)]
    write_table("retail", "products.csv", ["product_id", "product_name", "price", "in_stock"], rows)


def diabetes():
    rows = [[rng.randint(0, 12), rng.randint(60, 199), f"{rng.uniform(18, 50):.1f}", rng.randint(21, 81),
             rng.choice(["0", "1"])] for _ in range(40)]
    write_table("diabetes", "diabetes.csv", ["Pregnancies", "Glucose", "BMI", "Age", "Outcome"], rows)


PIPELINES = {
    ("titanic", "rf-baseline"): ("alice", 0.9, ["classification"], """\
import pandas as pd
from sklearn.model_selection import train_test_split
from sklearn.ensemble import RandomForestClassifier
from sklearn.metrics import accuracy_score

df = pd.read_csv('../input/titanic/train.csv')
df['Age'] = df['Age'].fillna(df['Age'].mean())
X = df[['Pclass', 'Age', 'Fare']]
y = df['Survived']
X_train, X_test, y_train, y_test = train_test_split(X, y, test_size=0.25, random_state=1)
model = RandomForestClassifier(n_estimators=100, random_state=1)
model.fit(X_train, y_train)
print(accuracy_score(y_test, model.predict(X_test)))
"""),
    ("titanic", "svc-scaled"): ("bob", 0.8, ["classification"], """\
import pandas as pd
from sklearn.preprocessing import StandardScaler
from sklearn.svm import SVC

train = pd.read_csv('train.csv')
scaler = StandardScaler()
train['Age'] = scaler.fit_transform(train[['Age']])
features = train[['Age', 'Pclass']]
clf = SVC(C=1.0, kernel='rbf')
clf.fit(features, train['Survived'])
score = clf.score(features, train['Survived'])
"""),
    ("titanic", "xgb-f1"): ("carol", 0.85, ["classification"], """\
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
"""),
    ("heart-disease", "logreg"): ("dave", 0.7, ["classification", "health"], """\
import pandas as pd
from sklearn.linear_model import LogisticRegression

heart = pd.read_csv('heart.csv')
for col in ['chol', 'trestbps']:
    heart[col] = heart[col].fillna(heart[col].mean())
if heart['age'].max() > 60:
    heart = heart.dropna()
model = LogisticRegression(C=0.5)
model.fit(heart[['age', 'chol', 'trestbps']], heart['target'])
"""),
    ("house-prices", "rf-regression"): ("erin", 0.75, ["regression"], """\
import numpy as np
import pandas as pd
from sklearn.ensemble import RandomForestRegressor

houses = pd.read_csv('houses.csv')
y = np.log1p(houses['SalePrice'])
X = houses[['LotArea', 'YearBuilt']]
reg = RandomForestRegressor(n_estimators=200)
reg.fit(X, y)
"""),
    ("house-prices", "linear"): ("frank", 0.6, ["regression"], """\
import pandas as pd
from sklearn.linear_model import LinearRegression


def add_income(frame, hoods):
    return pd.merge(frame, hoods, on='Neighborhood')


houses = pd.read_csv('houses.csv')
hoods = pd.read_csv('neighborhoods.csv')
data = add_income(houses, hoods)
reg = LinearRegression()
reg.fit(data[['LotArea', 'median_income']], data['SalePrice'])
"""),
    ("retail", "eda"): ("grace", 0.3, ["eda"], """\
import pandas as pd

orders = pd.read_csv('orders.csv')
customers = pd.read_csv('customers.csv')
joined = pd.merge(orders, customers, on='customer_id')
totals = joined.groupby('country')
print(totals.head())
"""),
    ("diabetes", "gbc"): ("heidi", 0.82, ["classification"], """\
import pandas as pd
from sklearn.preprocessing import MinMaxScaler
from sklearn.model_selection import train_test_split
from sklearn.ensemble import GradientBoostingClassifier, RandomForestClassifier
from sklearn.metrics import roc_auc_score

df = pd.read_csv('diabetes.csv')
X = MinMaxScaler().fit_transform(df[['Glucose', 'BMI', 'Age']])
y = df['Outcome']
X_train, X_test, y_train, y_test = train_test_split(X, y, test_size=0.2)
gbc = GradientBoostingClassifier(learning_rate=0.05)
gbc.fit(X_train, y_train)
rf = RandomForestClassifier(n_estimators=100)
rf.fit(X_train, y_train)
print(roc_auc_score(y_test, gbc.predict(X_test)))
"""),
}


def pipelines():
    for (dataset, pid), (author, score, tags, code) in PIPELINES.items():
        d = ROOT / "pipelines" / "kaggle" / dataset / pid
        d.mkdir(parents=True, exist_ok=True)
        (d / "pipeline.py").write_text(code)
        meta = {"author": author, "score": score, "tags": tags, "dataset_name": dataset,
                "url": f"https://www.kaggle.com/code/{author}/{pid}"}
        (d / "metadata.json").write_text(json.dumps(meta, indent=2) + "\n")


def unseen():
    # Near-duplicate of the titanic training table, absent from the corpus.
    header = ["PassengerId", "Survived", "Pclass", "Name", "Sex", "Age", "Fare", "Embarked"]
    rows = [[i, rng.choice(["0", "1"]), rng.choice([1, 2, 3]), name(), rng.choice(["male", "female"]),
             rng.randint(1, 70), f"{rng.uniform(5, 250):.2f}", rng.choice(["S", "C", "Q"])] for i in range(1, 31)]
    path = ROOT / "unseen" / "titanic-mirror" / "passengers.csv"
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


if __name__ == "__main__":
    titanic()
    heart()
    houses()
    retail()
    diabetes()
    pipelines()
    unseen()
