"""Smoke test for the extension module.

Build first:  pip install --no-build-isolation -e crates/python   (or maturin develop)
"""
import json

import multisecant_py as ms


def main():
    assert "twisted-cubic" in ms.builtin_names()

    eqs = ms.oh_equations("parabola", "2")
    assert len(eqs) == 2, eqs

    # tangent line to X0*X2 = X1^2 at (1:0:0)
    assert ms.line_section("parabola", 7, [1, 0, 0], [0, 1, 0]) == "{2}"
    # tangent to the twisted cubic at (1:0:0:0)
    assert ms.line_section("twisted-cubic", 11, [1, 0, 0, 0], [0, 1, 0, 0]) == "{2}"

    text, ok = ms.run(["census", "--builtin", "twisted-cubic", "--primes", "7", "--seed", "3"])
    report = json.loads(text)
    assert ok
    assert list(report) == sorted(report)

    try:
        ms.run(["oh-eqs", "--builtin", "nope", "--profile", "1"])
    except RuntimeError as e:
        assert "twisted-cubic" in str(e)
    else:
        raise AssertionError("unknown builtin accepted")
    print("smoke test ok")


if __name__ == "__main__":
    main()
