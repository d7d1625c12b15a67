"""Smoke test for the Python bindings.

Install first: pip install --no-build-isolation -e crates/py
"""

import json

import heyting


def main():
    f = heyting.Formula("((p -> q) -> p) -> p")
    assert f.degree() == 3
    assert f.variables() == ["p", "q"]

    assert heyting.prove("p & q", "q")
    assert not heyting.prove("true", "p | ~p")
    model, node = heyting.countermodel("true", "p | ~p")
    assert node in {n["id"] for n in json.loads(model)["nodes"]}

    assert heyting.space_size(["q", "p"], 0) == (4, 7)
    assert heyting.space_size(["p", "q"], 1)[0] == 13
    assert len(json.loads(heyting.space_json(["p"], 1))["elements"]) == 3

    e = heyting.uniform_exists("q & p", "p")
    assert e.formula == "q" and e.level_used == 7
    assert heyting.check_certificate(e.certificate()) > 0
    assert heyting.uniform_forall("q -> p", "p").formula == "~q"
    assert heyting.craig(heyting.Formula("p & q"), "q | r") == "q"

    try:
        heyting.Formula("p &")
    except ValueError:
        pass
    else:
        raise AssertionError("parse error expected")
    print("smoke test passed")


if __name__ == "__main__":
    main()
