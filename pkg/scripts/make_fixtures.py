"""Write the JSON fixtures used by the CLI examples and the test suite.

    python3 scripts/make_fixtures.py [outdir]
"""

import json
import sys
from pathlib import Path

from torsionlab.chaincore import ChainComplex, chain_complex_to_json
from torsionlab.fieldlin import QQ, Matrix, matrix_to_json
from torsionlab.pairings import TrainTrack, train_track_to_json
from torsionlab.surfcx import float_fixture, quad_fixture, representation_to_json


def dump(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=1, sort_keys=True) + "\n")
    print(path)


def main(out: Path) -> None:
    out.mkdir(parents=True, exist_ok=True)

    # chain complexes
    dump(out / "times2.json", chain_complex_to_json(ChainComplex.build([Matrix([[2]])], field=QQ)))
    dump(out / "identity.json", chain_complex_to_json(ChainComplex.build([Matrix([[1]])], field=QQ)))
    broken = {"dims": [1, 1, 1], "field": "rational",
              "boundaries": [matrix_to_json(Matrix([[1]])), matrix_to_json(Matrix([[1]]))]}
    dump(out / "broken.json", broken)

    # representations
    rep = quad_fixture(2, "sp", 2)
    dump(out / "octagon_sp4.json", dict(representation_to_json(rep), name="octagon_sp4"))
    triv = representation_to_json(rep)
    triv["generators"] = {x: matrix_to_json(Matrix.identity(4, QQ)) for x in triv["generators"]}
    triv.update(field="rational", name="trivial_sp4")
    dump(out / "trivial_sp4.json", triv)
    bad = representation_to_json(rep)
    a1 = rep.images["a1"].rows()
    a1[0][1] = a1[0][1] + rep.field(QQ(1) / 1000)
    bad["generators"]["a1"] = matrix_to_json(Matrix(a1, rep.field))
    bad["name"] = "perturbed_sp4"
    dump(out / "perturbed_sp4.json", bad)
    wrong = representation_to_json(rep)
    wrong["generators"]["a1"] = matrix_to_json(rep.images["a1"] @ rep.images["a1"])
    wrong["name"] = "wrong_relator_sp4"
    dump(out / "wrong_relator_sp4.json", wrong)
    for seed in range(3):
        rf, sol = float_fixture(seed)
        dump(out / f"float_sp4_{seed}.json", dict(representation_to_json(rf), name=f"float_sp4_{seed}",
                                                  relator_residual=sol.residual))

    # train track with one switch
    track = TrainTrack(("e1", "e2", "e3"), (("e1", "e2", "e3"),))
    dump(out / "track.json", train_track_to_json(track))
    dump(out / "cocycle_left.json", {"weights": {"e1": 1, "e2": 0, "e3": 1}})
    dump(out / "cocycle_right.json", {"weights": {"e1": 0, "e2": 1, "e3": 1}})
    dump(out / "cocycle_bad.json", {"weights": {"e1": 1, "e2": 1, "e3": 1}})


if __name__ == "__main__":
    main(Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "fixtures")
