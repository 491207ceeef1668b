"""The base learners on tiny, easy-to-inspect problems.

A weighted CART tree, the sequential-dual SVC on the XOR pattern, and
the logistic/KNN baselines.
"""

import numpy as np

from aefikit import CartConfig, Kernel, SvcConfig, cart_fit, cart_predict, gini
from aefikit import support_indices, svc_decision, svc_fit
from aefikit.data import Dataset
from aefikit.linear import KnnConfig, LogRegConfig, knn_fit, knn_predict, logreg_fit


def dataset(X, y):
    return Dataset(matrix=np.asarray(X, dtype=float), labels=np.asarray(y, dtype=np.int8),
                   row_ids=np.arange(len(y), dtype=np.int64))


print("gini impurity:", gini((10, 0)), gini((5, 5)), gini((9, 1)))

ds = dataset([[0.0], [1.0], [2.0], [3.0]], [0, 0, 1, 1])
tree = cart_fit(ds, None, CartConfig(max_depth=2))
print(f"cart on a 1-D step: {tree.n_nodes} nodes, "
      f"predict(0.4) = {cart_predict(tree, [0.4])}, predict(2.6) = {cart_predict(tree, [2.6])}")

xor_X = np.array([[0.0, 0.0], [1.0, 1.0], [0.0, 1.0], [1.0, 0.0]])
xor = dataset(xor_X, [0, 0, 1, 1])
svc = svc_fit(xor, SvcConfig(C=10.0, kernel=Kernel("polynomial", degree=2, gamma=1.0, coef0=1.0)))
print("svc on XOR with a degree-2 kernel:")
for i, row in enumerate(xor_X):
    print(f"  x={row} label={xor.labels[i]} decision={svc_decision(svc, row):+.3f}")
print(f"  support vectors: {support_indices(svc)} (all four corners matter)")

rng = np.random.default_rng(0)
X = np.concatenate([rng.normal(-2, 1, (40, 2)), rng.normal(2, 1, (40, 2))])
y = np.array([0] * 40 + [1] * 40)
blobs = dataset(X, y)

logreg = logreg_fit(blobs, LogRegConfig(learning_rate=0.5, iterations=300))
acc = float(np.mean(logreg.predict_rows(X) == y))
print(f"logistic regression on two blobs: training accuracy {acc:.2f}")

knn = knn_fit(blobs, KnnConfig(k=5))
label, frac = knn_predict(knn, np.array([1.8, 2.2]))
print(f"5-NN vote near the positive blob: label {label}, minority fraction {frac:.2f}")
