"""Independent arithmetic in F_2[[x]] with Python ints as bit vectors.

For q = 2 the C_inf model is F_2((x)) with x = 1/theta, so values computed
here can be compared digit by digit with CinfNum (digit k <-> bit k + shift).
"""


def clmul(a, b, n):
    """Carry-less product truncated to n bits."""
    out = 0
    mask = (1 << n) - 1
    while b:
        if b & 1:
            out ^= a
        a = (a << 1) & mask
        b >>= 1
    return out & mask


def inv(a, n):
    """Inverse of a series with constant term 1, mod x^n (bitwise long division)."""
    assert a & 1
    out = 0
    rem = 1
    for k in range(n):
        if (rem >> k) & 1:
            out |= 1 << k
            rem ^= a << k
    return out


def exponents(a, shift=0):
    return [k + shift for k in range(a.bit_length()) if (a >> k) & 1]


def carlitz_period_bits(n):
    """theta^2 prod_{i>=1} (1 + x^(2^i - 1))^(-1): returns (bits, shift=-2)."""
    acc = 1
    i = 1
    while (1 << i) - 1 < n:
        acc = clmul(acc, inv(1 | (1 << ((1 << i) - 1)), n), n)
        i += 1
    return acc, -2


def omega_disk_coeff(deg, n):
    """Coefficient of t^deg in theta * prod_i (1 - t x^(2^i))^(-1), as (bits, shift=-1).

    Expanding each factor geometrically, the coefficient of t^deg is
    sum over (k_0, k_1, ...) with sum k_i = deg of x^(sum k_i 2^i).
    """
    # dp[j] = bits of the sum over compositions of j using the factors seen so far
    dp = [0] * (deg + 1)
    dp[0] = 1
    i = 0
    while (1 << i) <= n:
        step = 1 << i
        new = [0] * (deg + 1)
        for j in range(deg + 1):
            for k in range(deg - j + 1):
                if k * step < n:
                    new[j + k] ^= (dp[j] << (k * step)) & ((1 << n) - 1)
        dp = new
        i += 1
    return dp[deg], -1
