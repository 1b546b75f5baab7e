"""Smoke test for the pellfib extension module."""

import pellfib


def main():
    assert pellfib.kfib(5, 7) == 31
    assert pellfib.cooper_howard(10, 16) == pellfib.kfib(10, 16) == 16336

    orbit = pellfib.PellOrbit(16, 1)
    assert (orbit.d, orbit.y1) == (255, 1)
    assert orbit.xn(3) == 16336
    assert orbit.xn_mod(3, 1000) == 336
    assert pellfib.fundamental_solution(2).x1 == 1
    assert pellfib.x1_from_bth_root(16336, 3) == 16

    records = pellfib.enumerate(20, 60, 120)
    by_n = {}
    for r in records:
        by_n.setdefault(r.n, set()).add(r.value)
    assert by_n == {1: {1, 2, 4, 8, 15, 16}, 2: {31, 127, 511}, 3: {16336}}, by_n
    assert all(pellfib.check_gamma(r) for r in records)

    x1, x2 = pellfib.verify_family_i(7)
    assert (x1.value, x2.value, x2.m) == (8, 127, 9)
    assert pellfib.family_ii_params(1) == (10, 6, 16)
    _, x3 = pellfib.verify_family_ii(1)
    assert (x3.k, x3.m, x3.value, x3.provenance) == (10, 16, 16336, "family-ii")

    report = pellfib.sweep_chi_quotients(4, 20, 30)
    assert report.complete() and report.cells == 17
    assert len(report.to_jsonl().splitlines()) == 17
    report = pellfib.sweep_dp(4, 5, m1_max=4)
    assert report.complete() and report.stat > 0

    report, survivors = pellfib.mod_sieve(12, 20, index_set=[2])
    assert 31 in {s[0] for s in survivors}
    assert int(report.extras["survivors"]) == len(survivors)

    try:
        pellfib.PellOrbit(4, 2)
    except ValueError:
        pass
    else:
        raise AssertionError("epsilon = 2 accepted")
    print("smoke test passed")


if __name__ == "__main__":
    main()
