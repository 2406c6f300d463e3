"""Quick end-to-end check of the Python bindings.

Build and install first:

    pip install --no-build-isolation ./crates/py
    python python/smoke_test.py
"""

import sfbc


def main():
    space = sfbc.Space(3)
    assert len(space) == 6
    assert space.rankings() == ["A>B>C", "A>C>B", "C>A>B", "C>B>A", "B>C>A", "B>A>C"]
    assert len(sfbc.Space(3, ties=True)) == 13

    profile = sfbc.Profile(space, "4: A>B>C\n3: B>C>A\n2: C>B>A\n")
    assert profile.total == "9"

    irv = sfbc.Method("irv")
    assert irv.evaluate(profile) == ["B"]
    assert sfbc.Method("plurality").evaluate(profile) == ["A"]

    tied = sfbc.Profile.from_counts(space, [1, 0, 0, 0, 0, 1])
    assert sfbc.Method("antiplurality").evaluate(tied) == ["A", "B"]

    assert sfbc.Method("antiplurality").stage_types() == ["Type1"]
    assert sfbc.Method("mdda").stage_types()[:2] == ["Type2", "Type1b"]

    alternating = "\n".join(
        f"{r} : {1 if k % 2 == 0 else -1}" for k, r in enumerate(space.rankings())
    )
    assert sfbc.classify_vector(space, alternating) == "Category3"

    clean = sfbc.check(sfbc.Method("antiplurality"), "sfbc", max_voters=5)
    assert clean.passed and clean.profiles_examined == 6 + 21 + 56 + 126 + 252

    dirty = sfbc.check(irv, "fbc", max_voters=9)
    assert not dirty.passed
    cx = dirty.counterexamples[0]
    assert cx.replay(irv)
    assert not cx.replay(sfbc.Method("plurality"))
    assert cx.sincere != cx.manipulation

    try:
        sfbc.Profile(space, "1: A>B>D")
    except sfbc.SfbcError as e:
        assert "line 1" in str(e)
    else:
        raise AssertionError("unknown label accepted")

    print(f"ok: {len(dirty)} IRV counterexamples up to 9 voters, e.g. {cx!r}")


if __name__ == "__main__":
    main()
