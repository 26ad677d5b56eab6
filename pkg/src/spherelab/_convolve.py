"""Exact truncated convolution of nonnegative integer sequences.

Two backends, both exact:

  * sparse schoolbook, used when nnz(a) * nnz(b) is small;
  * Kronecker substitution for the dense case: pack each sequence into one
    big integer with fixed-width slots, do a single big multiply, unpack.
    Slot width is derived from the rigorous coefficient bound
    min(sum(a) * max(b), sum(b) * max(a)), so no slot can overflow.

CPython's big-int multiply (Karatsuba) is already fast enough for the
acceptance workloads; gmpy2 (GMP, FFT multiply) is used when importable.
Results are identical either way.
"""

from __future__ import annotations

try:  # optional fast path
    import gmpy2 as _gmpy2
except ImportError:  # pragma: no cover - depends on environment
    _gmpy2 = None

_SPARSE_WORK_LIMIT = 2_000_000


def _bigmul(a: int, b: int) -> int:
    if _gmpy2 is not None:
        return int(_gmpy2.mpz(a) * _gmpy2.mpz(b))
    return a * b


def _pack(seq: list[int], width: int) -> int:
    buf = bytearray(len(seq) * width)
    for i, c in enumerate(seq):
        if c:
            buf[i * width : (i + 1) * width] = c.to_bytes(width, "little")
    return int.from_bytes(buf, "little")


def _unpack_prefix(n: int, count: int, width: int) -> list[int]:
    raw = n.to_bytes((n.bit_length() + 7) // 8 + width, "little")
    return [
        int.from_bytes(raw[i * width : (i + 1) * width], "little")
        for i in range(count)
    ]


def _convolve_sparse(a: list[int], b: list[int], n_out: int) -> list[int]:
    out = [0] * n_out
    nz_b = [(j, v) for j, v in enumerate(b) if v]
    for i, u in enumerate(a):
        if not u:
            continue
        for j, v in nz_b:
            if i + j >= n_out:
                break
            out[i + j] += u * v
    return out


def convolve_trunc(a: list[int], b: list[int], n_out: int) -> list[int]:
    """First n_out coefficients of the product of the generating series a, b.

    All entries must be nonnegative integers; the result is exact.
    """
    nnz_a = sum(1 for v in a if v)
    nnz_b = sum(1 for v in b if v)
    if nnz_a == 0 or nnz_b == 0:
        return [0] * n_out
    if nnz_a * nnz_b <= _SPARSE_WORK_LIMIT:
        return _convolve_sparse(a, b, n_out)
    bound = min(sum(a) * max(b), sum(b) * max(a))
    width = bound.bit_length() // 8 + 2  # slack byte, slots never overflow
    prod = _bigmul(_pack(a, width), _pack(b, width))
    return _unpack_prefix(prod, n_out, width)


def power_trunc(g: list[int], exponent: int, n_out: int) -> list[int]:
    """g**exponent as a truncated generating series, by repeated squaring."""
    result = [0] * n_out
    result[0] = 1
    base = list(g[:n_out]) + [0] * max(0, n_out - len(g))
    e = exponent
    while e:
        if e & 1:
            result = convolve_trunc(result, base, n_out)
        e >>= 1
        if e:
            base = convolve_trunc(base, base, n_out)
    return result
