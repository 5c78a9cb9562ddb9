# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled CSR kernels: sparse*dense products and neighborhood label counts."""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def csr_dense_matmul(const cnp.int64_t[::1] row_offsets,
                     const cnp.int64_t[::1] col_indices,
                     const cnp.float64_t[::1] values,
                     const cnp.float64_t[:, ::1] dense):
    cdef Py_ssize_t n_rows = row_offsets.shape[0] - 1
    cdef Py_ssize_t n_cols = dense.shape[1]
    out_arr = np.zeros((n_rows, n_cols), dtype=np.float64)
    cdef cnp.float64_t[:, ::1] out = out_arr
    cdef Py_ssize_t i, jj, k
    cdef cnp.int64_t j
    cdef double v
    for i in range(n_rows):
        for jj in range(row_offsets[i], row_offsets[i + 1]):
            j = col_indices[jj]
            v = values[jj]
            for k in range(n_cols):
                out[i, k] += v * dense[j, k]
    return out_arr


def neighbor_label_counts(const cnp.int64_t[::1] row_offsets,
                          const cnp.int64_t[::1] col_indices,
                          const cnp.int64_t[::1] labels,
                          const cnp.int64_t[::1] nodes,
                          Py_ssize_t num_classes):
    out_arr = np.zeros((nodes.shape[0], num_classes), dtype=np.int64)
    cdef cnp.int64_t[:, ::1] out = out_arr
    cdef Py_ssize_t i, jj
    cdef cnp.int64_t u
    for i in range(nodes.shape[0]):
        u = nodes[i]
        for jj in range(row_offsets[u], row_offsets[u + 1]):
            out[i, labels[col_indices[jj]]] += 1
    return out_arr
