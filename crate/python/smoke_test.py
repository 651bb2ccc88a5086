"""Smoke test for the double_bubble extension module."""

import json
import math

import double_bubble as db


def close(a, b, tol):
    assert abs(a - b) <= tol, (a, b)


def main():
    m = db.StandardBubble(3, 1.0, 1.0)
    assert m.degenerate_kind == "NONE" and m.weight_class == "STRICT"
    close(m.curvatures[0], 0.0, 1e-12)
    close(m.conormal_residual(), 0.0, 1e-12)

    net = m.network_json()
    v1, v2 = db.network_volumes(net)
    close(v1, 1.0, 1e-9)
    close(v2, 1.0, 1e-9)
    close(db.relative_area(net, 1, 1, 1, v1=1.0, v2=1.0)["mu"], 1.0, 1e-9)
    try:
        db.relative_area(net, 1, 1, 1, v1=1.0, v2=2.0)
    except db.ClassMismatchError:
        pass
    else:
        raise AssertionError("class mismatch not raised")

    d = db.sleeves_and_cuffs(net, 1, 1, 1)
    assert len(d["cuffs"]) == 1
    close(d["cuffs"][0]["cuff"]["beta"], math.pi / 3, 1e-10)
    assert db.calibration_audit(net, 1, 1, 1)["verdict"] == "CONSISTENT"

    disjoint = db.StandardBubble(3, 1.0, 1.0, 3.0, 1.0, 1.0)
    assert disjoint.degenerate_kind == "DISJOINT"
    r = (3 / (4 * math.pi)) ** (1 / 3)
    close(disjoint.q, 8 * math.pi * r * r, 1e-10)

    es = db.perturb(m, "EXTRA_SLEEVE", 0.05)
    ex = db.overlap_excess(es[0], 1, 1, 1)
    assert ex["status"] == "APPLICABLE" and ex["excess"] > 0
    assert db.relative_area(es[0], 1, 1, 1)["mu"] > 1

    rows = db.sweep(ratios=[0.5], w0=[1.0], w1=[1.0], epsilons=[0.03])
    assert len(rows) == 4 and all(row["status"] == "OK" for row in rows)
    assert min(row["mu_min"] for row in rows) >= 1 - 1e-9

    close(db.zone_area(3, 0.0, math.pi), 4 * math.pi, 1e-12)
    close(db.latitude_measure(3, math.pi / 2), 2 * math.pi, 1e-12)
    close(db.cap_perimeter_for_area(3, 2 * math.pi), 2 * math.pi, 1e-12)
    assert db.weight_class(2, 1, 1).startswith("BOUNDARY")

    square = [[0, 0], [1, 0], [1, 1], [0, 1]]
    loop = [{"p": square[i], "q": square[(i + 1) % 4], "kappa": 0.0} for i in range(4)]
    cert = db.symmetrize_certificate(json.dumps({"loops": [loop]}))
    assert cert["strict"] and cert["perimeter_after"] < 4

    print("smoke test passed")


if __name__ == "__main__":
    main()
