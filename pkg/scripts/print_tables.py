"""Print EOP tables, measured ladder constants and chain spectra for a few sample points."""

from fractions import Fraction

from eopladder import families as fam
from eopladder import ladderlab as ll
from eopladder.families import FamilySpec

SAMPLES = [
    FamilySpec.x1_jacobi(1, 2),
    FamilySpec.x1_laguerre(1),
    FamilySpec.xm_jacobi(2, Fraction(5, 2), 2),
    FamilySpec.xm_laguerre(2, 3),
]


def show(spec: FamilySpec, n_span: int = 3) -> None:
    err = fam.validation_error(spec)
    print(f"== {spec.label()}  ({'admissible' if err is None else type(err).__name__})")
    for n in range(spec.m, spec.m + n_span + 1):
        line = f"  n={n}  E={fam.eigenvalue(spec, n)}  P={ll.eop(spec, n)}"
        if n > spec.m:
            consts, _ = ll.verify_ladder(spec, n)
            line += f"  lambda_A={consts.lambda_a} lambda_B={consts.lambda_b}"
        print(line)
    print("  R =", [str(fam.si_shift_constant(spec, j)) for j in range(1, n_span + 1)])


if __name__ == "__main__":
    for s in SAMPLES:
        show(s)
