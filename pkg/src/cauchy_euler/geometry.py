"""Small planar predicates.

Rational (int or Fraction) coordinates are handled exactly; anything else
falls back to floats with an absolute tolerance on the cross product.
"""

from fractions import Fraction
from numbers import Rational

TOL = 1e-9


def is_exact(*points):
    return all(isinstance(x, Rational) for p in points for x in p)


def cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def orient(o, a, b, tol=TOL):
    """Sign of the turn o -> a -> b: +1 left, -1 right, 0 collinear."""
    v = cross(o, a, b)
    if not is_exact(o, a, b):
        scale = max(1.0, abs(a[0] - o[0]) + abs(a[1] - o[1])) * max(
            1.0, abs(b[0] - o[0]) + abs(b[1] - o[1]))
        if abs(v) <= tol * scale:
            return 0
    return (v > 0) - (v < 0)


def on_segment(p, a, b):
    """p collinear with ab assumed; True if p lies in the closed box of ab."""
    return (min(a[0], b[0]) - TOL <= p[0] <= max(a[0], b[0]) + TOL
            and min(a[1], b[1]) - TOL <= p[1] <= max(a[1], b[1]) + TOL)


def segments_intersect(a, b, c, d):
    """Closed segments ab and cd share at least one point."""
    o1, o2 = orient(a, b, c), orient(a, b, d)
    o3, o4 = orient(c, d, a), orient(c, d, b)
    if o1 != o2 and o3 != o4 and 0 not in (o1, o2, o3, o4):
        return True
    if o1 == 0 and on_segment(c, a, b):
        return True
    if o2 == 0 and on_segment(d, a, b):
        return True
    if o3 == 0 and on_segment(a, c, d):
        return True
    if o4 == 0 and on_segment(b, c, d):
        return True
    return False


def point_in_triangle(p, a, b, c, strict=True):
    s1, s2, s3 = orient(a, b, p), orient(b, c, p), orient(c, a, p)
    if strict:
        return (s1 == s2 == s3) and s1 != 0
    has_neg = -1 in (s1, s2, s3)
    has_pos = 1 in (s1, s2, s3)
    return not (has_neg and has_pos)


def signed_area(poly):
    s = 0
    n = len(poly)
    for i in range(n):
        x1, y1 = poly[i]
        x2, y2 = poly[(i + 1) % n]
        s += x1 * y2 - x2 * y1
    return s / 2 if not is_exact(*poly) else Fraction(s, 2)


def lerp(p, q, t):
    return tuple(a + (b - a) * t for a, b in zip(p, q))


def same_point(p, q, tol=TOL):
    if is_exact(p, q):
        return tuple(p) == tuple(q)
    return all(abs(a - b) <= tol for a, b in zip(p, q))
