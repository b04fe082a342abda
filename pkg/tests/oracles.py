"""Independent brute-force oracles used to freeze and re-verify expected
values.  Deliberately written against raw tuples, with no imports from the
package, so they stay an independent second route."""

from collections import deque


def heisenberg_mul(p, q):
    x, y, z = p
    X, Y, Z = q
    return (x + X, y + Y, z + Z + x * Y)


HEISENBERG_GENS = ((1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0))


def heisenberg_lengths(radius):
    """Exact word lengths on the Heisenberg ball via direct BFS."""
    dist = {(0, 0, 0): 0}
    frontier = deque([(0, 0, 0)])
    while frontier:
        g = frontier.popleft()
        d = dist[g]
        if d == radius:
            continue
        for s in HEISENBERG_GENS:
            h = heisenberg_mul(g, s)
            if h not in dist:
                dist[h] = d + 1
                frontier.append(h)
    return dist


def heisenberg_power(g, j):
    acc = (0, 0, 0)
    for _ in range(j):
        acc = heisenberg_mul(acc, g)
    return acc


def grid_avoidant_length(a, b, c, forbidden_radius, window):
    """Shortest L1 path in Z^2 within |x|+|y| <= window, avoiding the open
    L1 ball of the given radius around c.  None when disconnected."""

    def forbidden(p):
        return abs(p[0] - c[0]) + abs(p[1] - c[1]) < forbidden_radius

    def inside(p):
        return abs(p[0]) + abs(p[1]) <= window

    if forbidden(a) or forbidden(b):
        return None
    dist = {a: 0}
    frontier = deque([a])
    while frontier:
        p = frontier.popleft()
        if p == b:
            return dist[p]
        x, y = p
        for nb in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)):
            if nb not in dist and inside(nb) and not forbidden(nb):
                dist[nb] = dist[p] + 1
                frontier.append(nb)
    return None


def l1_ball_size(dimension_2_radius):
    """Closed-form count of the L1 ball in Z^2."""
    n = dimension_2_radius
    return 2 * n * n + 2 * n + 1
