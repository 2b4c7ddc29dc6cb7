"""Write the shipped group and preorder data files.

Run from the repository root:  python3 tools/make_group_data.py
"""
import json
from pathlib import Path

from kostkasys.scalars import Cyclo

OUT = Path(__file__).resolve().parent.parent / "src" / "kostkasys" / "data"


def c(x, N=1):
    if isinstance(x, Cyclo):
        return x.lift(N).to_json()
    return Cyclo.rational(x, N).to_json()


def mat(M, N=1):
    return [[c(x, N) for x in row] for row in M]


def write(name, doc):
    (OUT / name).write_text(json.dumps(doc, indent=1) + "\n")


# B2 = W(C2) on h = C^2: t changes the sign of x1, s swaps x1 and x2.
# Characters are labelled by bipartitions "lambda.mu".
b2 = {
    "format": 1,
    "name": "B2",
    "description": "Weyl group of type B2 (dihedral of order 8); t = sign change of the "
                   "first coordinate, s = coordinate swap. Characters labelled by "
                   "bipartitions: '11.' is 1 on t and -1 on s, '.2' is -1 on t and 1 on s.",
    "conductor": 1,
    "dim_h": 2,
    "generators": [mat([[-1, 0], [0, 1]]), mat([[0, 1], [1, 0]])],
    # classes: 1, -1, rotation ts, sign changes {t, sts}, swaps {s, tst}
    "class_reps": [[], [0, 1, 0, 1], [0, 1], [0], [1]],
    "class_sizes": [1, 1, 2, 2, 2],
    "characters": [
        {"name": "2.", "values": [c(v) for v in (1, 1, 1, 1, 1)]},
        {"name": "11.", "values": [c(v) for v in (1, 1, -1, 1, -1)]},
        {"name": "1.1", "values": [c(v) for v in (2, -2, 0, 0, 0)]},
        {"name": ".2", "values": [c(v) for v in (1, 1, -1, -1, 1)]},
        {"name": ".11", "values": [c(v) for v in (1, 1, 1, -1, -1)]},
    ],
}

# G2 on the root lattice, basis (a, b) of simple roots, a short and b long.
g2 = {
    "format": 1,
    "name": "G2",
    "description": "Weyl group of type G2 (dihedral of order 12) on the root lattice, "
                   "basis of simple roots a (short) and b (long). phi1,3' is -1 on "
                   "reflections in long roots, phi1,3'' is -1 on reflections in short roots.",
    "conductor": 1,
    "dim_h": 2,
    "generators": [mat([[-1, 3], [0, 1]]), mat([[1, 0], [1, -1]])],
    # classes: 1, rotation c = s_a s_b (order 6), c^2, c^3 = -1, short reflections, long reflections
    "class_reps": [[], [0, 1], [0, 1, 0, 1], [0, 1, 0, 1, 0, 1], [0], [1]],
    "class_sizes": [1, 2, 2, 1, 3, 3],
    "characters": [
        {"name": "phi1,0", "values": [c(v) for v in (1, 1, 1, 1, 1, 1)]},
        {"name": "phi1,6", "values": [c(v) for v in (1, 1, 1, 1, -1, -1)]},
        {"name": "phi1,3'", "values": [c(v) for v in (1, -1, 1, -1, 1, -1)]},
        {"name": "phi1,3''", "values": [c(v) for v in (1, -1, 1, -1, -1, 1)]},
        {"name": "phi2,1", "values": [c(v) for v in (2, 1, -1, -2, 0, 0)]},
        {"name": "phi2,2", "values": [c(v) for v in (2, -1, -1, 2, 0, 0)]},
    ],
}

z = Cyclo.zeta(3)
c3 = {
    "format": 1,
    "name": "C3",
    "description": "Cyclic group G(3,1,1) acting on a line by zeta_3. chi_k sends the "
                   "generator to zeta_3^k.",
    "conductor": 3,
    "dim_h": 1,
    "generators": [[[c(z, 3)]]],
    "class_reps": [[], [0], [0, 0]],
    "class_sizes": [1, 1, 1],
    "characters": [
        {"name": "chi0", "values": [c(1, 3), c(1, 3), c(1, 3)]},
        {"name": "chi1", "values": [c(1, 3), c(z, 3), c(z * z, 3)]},
        {"name": "chi2", "values": [c(1, 3), c(z * z, 3), c(z, 3)]},
    ],
}

if __name__ == "__main__":
    OUT.mkdir(parents=True, exist_ok=True)
    write("B2.json", b2)
    write("G2.json", g2)
    write("C3.json", c3)
