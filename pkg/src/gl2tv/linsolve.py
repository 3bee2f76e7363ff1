"""Exact linear systems over Q(sqrt q)(X, Y).

Rows are cleared of denominators and reduced by fraction-free (Bareiss)
elimination, so every intermediate entry stays a polynomial and each
division is exact.  Only the final back-substitution produces fractions.
"""

from __future__ import annotations

from dataclasses import dataclass

from .field import FieldElement, Poly, exact_divide

__all__ = ["InconsistentSystemError", "SolutionSet", "solve_linear"]


class InconsistentSystemError(ValueError):
    pass


@dataclass(eq=False)
class SolutionSet:
    """Affine solution set: particular + span(kernel)."""

    rows: list
    rhs: list
    particular: list
    kernel: list
    pivot_columns: list

    @property
    def rank(self):
        return len(self.pivot_columns)

    def satisfies(self, vector):
        """True when ``vector`` solves every equation exactly."""
        if len(vector) != len(self.particular):
            raise ValueError("vector length does not match the number of unknowns")
        return all(_dot(row, vector) == b for row, b in zip(self.rows, self.rhs))

    __contains__ = satisfies


def _dot(row, vector):
    total = 0
    for a, x in zip(row, vector):
        total = a * x + total
    return total


def _clear_row(row):
    """Scale a row of FieldElements to polynomials (same solution set)."""
    dens = []
    for x in row:
        if not any(x.den == d for d in dens):
            dens.append(x.den)
    common = dens[0]
    for d in dens[1:]:
        if exact_divide(common, d) is None:
            common = common * d
    out = []
    for x in row:
        t = exact_divide(common, x.den)
        assert t is not None
        out.append(x.num * t)
    return out


def _echelon(matrix, ncols):
    """In-place fraction-free echelon form on the first ``ncols`` columns."""
    n = len(matrix)
    q = matrix[0][0].q
    prev = Poly.const(q, 1)
    pivots = []
    r = 0
    for col in range(ncols):
        cand = [i for i in range(r, n) if not matrix[i][col].is_zero()]
        if not cand:
            continue
        i = min(cand, key=lambda i: (len(matrix[i][col].terms), matrix[i][col].degree(), i))
        matrix[r], matrix[i] = matrix[i], matrix[r]
        piv = matrix[r][col]
        for i in range(r + 1, n):
            lead = matrix[i][col]
            for j in range(col + 1, len(matrix[i])):
                val = piv * matrix[i][j] - lead * matrix[r][j]
                quo = exact_divide(val, prev)
                if quo is None:
                    raise ArithmeticError("Bareiss step was not exact")
                matrix[i][j] = quo
            matrix[i][col] = Poly(q)
        prev = piv
        pivots.append((r, col))
        r += 1
        if r == n:
            break
    return pivots


def _back_substitute(matrix, pivots, ncols, rhs_col, free_values):
    q = matrix[0][0].q
    zero = FieldElement.const(q, 0)
    x = [free_values.get(j, zero) for j in range(ncols)]
    for r, col in reversed(pivots):
        s = FieldElement(matrix[r][ncols]) if rhs_col else zero
        for j in range(col + 1, ncols):
            if not matrix[r][j].is_zero() and not x[j].is_zero():
                s = s - FieldElement(matrix[r][j]) * x[j]
        x[col] = s / FieldElement(matrix[r][col])
    return x


def solve_linear(rows, rhs):
    """Solve rows * x = rhs exactly; raise InconsistentSystemError if impossible."""
    if not rows:
        raise ValueError("empty system")
    ncols = len(rows[0])
    q = rows[0][0].q
    matrix = [_clear_row(list(row) + [b]) for row, b in zip(rows, rhs)]
    pivots = _echelon(matrix, ncols)
    for i in range(len(pivots), len(matrix)):
        if not matrix[i][ncols].is_zero():
            raise InconsistentSystemError("no exact combination exists for this translate set")
    pivot_cols = [c for _, c in pivots]
    free = [j for j in range(ncols) if j not in pivot_cols]
    particular = _back_substitute(matrix, pivots, ncols, True, {})
    one = FieldElement.const(q, 1)
    kernel = [_back_substitute(matrix, pivots, ncols, False, {f: one}) for f in free]
    return SolutionSet(list(rows), list(rhs), particular, kernel, pivot_cols)
