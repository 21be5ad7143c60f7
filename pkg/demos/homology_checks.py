"""Kunneth and universal coefficients on small complexes."""

from coarsegrp.complexes import cycle_complex, multiplication_complex, tensor_product
from coarsegrp.homology import (INTEGERS, RATIONALS, homology, kunneth_check, mod,
                                uct_check)

C4 = cycle_complex(4)
print("H(C4)      =", [str(h) for h in homology(C4)])
print("H(C4 x C4) =", [str(h) for h in homology(tensor_product(C4, C4))])

two = multiplication_complex(2)
for ring in (INTEGERS, RATIONALS, mod(2)):
    v = kunneth_check(two, two, ring)
    print(f"x2 (x) x2 over {ring.name}:",
          [(str(x.lhs), str(x.rhs)) for x in v], "ok" if all(x.equal for x in v) else "FAIL")

three = multiplication_complex(3)
for target in (RATIONALS, mod(2), mod(3)):
    v = uct_check(three, target)
    print(f"UCT for x3 into {target.name}:", [(str(x.lhs), str(x.rhs)) for x in v])
