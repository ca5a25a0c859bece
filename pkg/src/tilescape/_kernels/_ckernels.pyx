# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled grid kernels; same contract as ``_pykernels``."""

import numpy as np

cdef int[4] DX = [0, -1, 1, 0]
cdef int[4] DY = [-1, 0, 0, 1]


def label4(mask):
    cdef const unsigned char[:, :] m = np.ascontiguousarray(mask, dtype=np.uint8)
    cdef Py_ssize_t h = m.shape[0], w = m.shape[1]
    labels_arr = np.full((h, w), -1, dtype=np.int32)
    cdef int[:, :] labels = labels_arr
    queue_arr = np.empty(max(h * w, 1), dtype=np.int64)
    cdef long long[:] queue = queue_arr
    cdef Py_ssize_t x, y, head, tail, cx, cy, nx, ny, k
    cdef long long cur
    cdef int count = 0
    for y in range(h):
        for x in range(w):
            if m[y, x] == 0 or labels[y, x] != -1:
                continue
            labels[y, x] = count
            head = 0
            tail = 0
            queue[tail] = y * w + x
            tail += 1
            while head < tail:
                cur = queue[head]
                head += 1
                cy = cur // w
                cx = cur - cy * w
                for k in range(4):
                    nx = cx + DX[k]
                    ny = cy + DY[k]
                    if 0 <= nx < w and 0 <= ny < h and m[ny, nx] != 0 and labels[ny, nx] == -1:
                        labels[ny, nx] = count
                        queue[tail] = ny * w + nx
                        tail += 1
            count += 1
    return labels_arr, count


def bfs_distances(mask, start):
    cdef const unsigned char[:, :] m = np.ascontiguousarray(mask, dtype=np.uint8)
    cdef Py_ssize_t h = m.shape[0], w = m.shape[1]
    dist_arr = np.full((h, w), -1, dtype=np.int32)
    cdef int[:, :] dist = dist_arr
    cdef Py_ssize_t sx = start[0], sy = start[1]
    if not (0 <= sx < w and 0 <= sy < h) or m[sy, sx] == 0:
        return dist_arr
    queue_arr = np.empty(h * w, dtype=np.int64)
    cdef long long[:] queue = queue_arr
    cdef Py_ssize_t head = 0, tail = 0, cx, cy, nx, ny, k
    cdef long long cur
    dist[sy, sx] = 0
    queue[tail] = sy * w + sx
    tail += 1
    while head < tail:
        cur = queue[head]
        head += 1
        cy = cur // w
        cx = cur - cy * w
        for k in range(4):
            nx = cx + DX[k]
            ny = cy + DY[k]
            if 0 <= nx < w and 0 <= ny < h and m[ny, nx] != 0 and dist[ny, nx] == -1:
                dist[ny, nx] = dist[cy, cx] + 1
                queue[tail] = ny * w + nx
                tail += 1
    return dist_arr


def shortest_path(mask, start, goal):
    cdef const unsigned char[:, :] m = np.ascontiguousarray(mask, dtype=np.uint8)
    cdef Py_ssize_t h = m.shape[0], w = m.shape[1]
    cdef Py_ssize_t sx = start[0], sy = start[1], gx = goal[0], gy = goal[1]
    if not (0 <= sx < w and 0 <= sy < h and 0 <= gx < w and 0 <= gy < h):
        return None
    if m[sy, sx] == 0 or m[gy, gx] == 0:
        return None
    parent_arr = np.full(h * w, -2, dtype=np.int64)
    cdef long long[:] parent = parent_arr
    queue_arr = np.empty(h * w, dtype=np.int64)
    cdef long long[:] queue = queue_arr
    cdef Py_ssize_t head = 0, tail = 0, cx, cy, nx, ny, k
    cdef long long cur, goal_idx = gy * w + gx, nxt
    parent[sy * w + sx] = -1
    queue[tail] = sy * w + sx
    tail += 1
    while head < tail:
        cur = queue[head]
        head += 1
        if cur == goal_idx:
            break
        cy = cur // w
        cx = cur - cy * w
        for k in range(4):
            nx = cx + DX[k]
            ny = cy + DY[k]
            if 0 <= nx < w and 0 <= ny < h and m[ny, nx] != 0:
                nxt = ny * w + nx
                if parent[nxt] == -2:
                    parent[nxt] = cur
                    queue[tail] = nxt
                    tail += 1
    if parent[goal_idx] == -2:
        return None
    path = []
    cur = goal_idx
    while cur != -1:
        path.append((int(cur % w), int(cur // w)))
        cur = parent[cur]
    path.reverse()
    return path
