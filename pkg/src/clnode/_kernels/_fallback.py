"""Pure-NumPy implementations of the CSR kernels.

Same signatures and results as the compiled module; slower on large graphs.
"""

import numpy as np


def csr_dense_matmul(row_offsets, col_indices, values, dense):
    """Multiply a CSR matrix by a dense float64 matrix.

    Rows with no stored entries yield zero rows.
    """
    n_rows = row_offsets.shape[0] - 1
    out = np.zeros((n_rows, dense.shape[1]), dtype=np.float64)
    if col_indices.shape[0] == 0:
        return out
    weighted = values[:, None] * dense[col_indices]
    nonempty = np.flatnonzero(np.diff(row_offsets) > 0)
    # reduceat segment i spans row nonempty[i]; empty rows contribute nothing
    out[nonempty] = np.add.reduceat(weighted, row_offsets[nonempty], axis=0)
    return out


def neighbor_label_counts(row_offsets, col_indices, labels, nodes, num_classes):
    """Histogram the labels of each queried node's open neighborhood.

    Returns an int64 array of shape (len(nodes), num_classes).
    """
    counts = np.zeros((nodes.shape[0], num_classes), dtype=np.int64)
    starts = row_offsets[nodes]
    degrees = row_offsets[nodes + 1] - starts
    total = int(degrees.sum())
    if total == 0:
        return counts
    rows = np.repeat(np.arange(nodes.shape[0]), degrees)
    within = np.arange(total) - np.repeat(np.cumsum(degrees) - degrees, degrees)
    neighbor_labels = labels[col_indices[starts[rows] + within]]
    np.add.at(counts, (rows, neighbor_labels), 1)
    return counts
