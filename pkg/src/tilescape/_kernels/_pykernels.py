"""Pure-Python grid kernels.

Reference implementation of the routines in ``_ckernels.pyx``; selected
automatically when the compiled extension is unavailable.
"""

from __future__ import annotations

from collections import deque

import numpy as np

# up, left, right, down
_STEPS = ((0, -1), (-1, 0), (1, 0), (0, 1))


def label4(mask):
    """Label 4-connected components of a boolean (H, W) mask.

    Background cells get -1; components are numbered in row-major order of
    their first cell. Returns ``(labels, count)``.
    """
    m = np.ascontiguousarray(mask, dtype=np.uint8)
    h, w = m.shape
    labels = np.full((h, w), -1, dtype=np.int32)
    cells = m.tolist()
    out = labels.tolist()
    count = 0
    for y in range(h):
        row = cells[y]
        for x in range(w):
            if not row[x] or out[y][x] != -1:
                continue
            out[y][x] = count
            queue = deque([(x, y)])
            while queue:
                cx, cy = queue.popleft()
                for dx, dy in _STEPS:
                    nx, ny = cx + dx, cy + dy
                    if 0 <= nx < w and 0 <= ny < h and cells[ny][nx] and out[ny][nx] == -1:
                        out[ny][nx] = count
                        queue.append((nx, ny))
            count += 1
    if h and w:
        labels[:, :] = out
    return labels, count


def bfs_distances(mask, start):
    """Breadth-first step distances from ``start`` over a boolean mask (-1 = unreached)."""
    m = np.ascontiguousarray(mask, dtype=np.uint8)
    h, w = m.shape
    dist = [[-1] * w for _ in range(h)]
    sx, sy = start
    cells = m.tolist()
    if 0 <= sx < w and 0 <= sy < h and cells[sy][sx]:
        dist[sy][sx] = 0
        queue = deque([(sx, sy)])
        while queue:
            cx, cy = queue.popleft()
            d = dist[cy][cx] + 1
            for dx, dy in _STEPS:
                nx, ny = cx + dx, cy + dy
                if 0 <= nx < w and 0 <= ny < h and cells[ny][nx] and dist[ny][nx] == -1:
                    dist[ny][nx] = d
                    queue.append((nx, ny))
    return np.array(dist, dtype=np.int32).reshape(h, w)


def shortest_path(mask, start, goal):
    """Shortest 4-connected path as a list of (x, y) cells, or None.

    Neighbours are expanded in the order up, left, right, down, so the
    returned path is the first one found under that order.
    """
    m = np.ascontiguousarray(mask, dtype=np.uint8)
    h, w = m.shape
    sx, sy = start
    gx, gy = goal
    if not (0 <= sx < w and 0 <= sy < h and 0 <= gx < w and 0 <= gy < h):
        return None
    cells = m.tolist()
    if not cells[sy][sx] or not cells[gy][gx]:
        return None
    parent = {(sx, sy): None}
    queue = deque([(sx, sy)])
    while queue:
        cur = queue.popleft()
        if cur == (gx, gy):
            break
        cx, cy = cur
        for dx, dy in _STEPS:
            nxt = (cx + dx, cy + dy)
            nx, ny = nxt
            if 0 <= nx < w and 0 <= ny < h and cells[ny][nx] and nxt not in parent:
                parent[nxt] = cur
                queue.append(nxt)
    if (gx, gy) not in parent:
        return None
    path = []
    node = (gx, gy)
    while node is not None:
        path.append(node)
        node = parent[node]
    path.reverse()
    return path
