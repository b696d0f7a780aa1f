"""Independent reference computations shared by the test modules."""

import math

from shimura.arith import kronecker


def classes_by_double_loop(delta):
    """Reduced primitive forms of discriminant delta, counted by looping over (a, b) with c forced."""
    n = 0
    for a in range(1, math.isqrt(-delta // 3) + 2):
        for b in range(-a, a + 1):
            num = b * b - delta
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or math.gcd(math.gcd(a, b), c) != 1:
                continue
            if b == -a or (a == c and b < 0):
                continue
            n += 1
    return n


def class_number_analytic(delta):
    """Dirichlet's class number formula for a fundamental discriminant delta < -4."""
    return -sum(kronecker(delta, n) * n for n in range(1, -delta)) // -delta


def example_f(N):
    """Closed form of f_N for D=13, dL=3, B=2."""
    if kronecker(N, 13) == 1 or N % 9 == 0:
        return 0
    if N % 169 == 0:
        return 2
    return 1
