"""Smoke test for the pyreltab extension module.

Build and install first:
    pip install --no-build-isolation -e crates/python
"""

import json

import pyreltab


def main():
    t = pyreltab.Term("1 ; (r | -r)")
    assert t.simplify() == t and t.size == 6
    assert t.fragment_violation() is None
    assert pyreltab.Term("r ^").fragment_violation() is not None
    assert pyreltab.Term("-(r & s)").normal_form() == pyreltab.Term("-r | -s")

    proof = pyreltab.prove("r | -r")
    assert proof.valid and proof.countermodel_json() is None
    json.loads(proof.tree_json())

    refuted = pyreltab.prove(pyreltab.Term("r"))
    assert not refuted.valid
    model = refuted.countermodel_json()
    assert not pyreltab.check_model("r", model)
    assert not pyreltab.check_model("x r y", model)

    assert pyreltab.entail(["-r | -(s1 | s2)"], "-s1 | -r").valid
    assert not pyreltab.entail(["-r | -s1"], "-r | -s2").valid

    assert pyreltab.modal("[r](p -> q) -> ([r]p -> [r]q)").valid
    assert not pyreltab.modal("p -> [r]p").valid

    for bad, exc in [("r |", ValueError), ("r ^", pyreltab.FragmentError)]:
        try:
            pyreltab.prove(bad)
        except exc:
            pass
        else:
            raise AssertionError(f"{bad!r} should raise {exc.__name__}")
    try:
        pyreltab.prove("(r | s) | (p | q)", max_steps=1)
    except pyreltab.ResourceError:
        pass
    else:
        raise AssertionError("step limit should raise")

    print("pyreltab smoke test passed")


if __name__ == "__main__":
    main()
