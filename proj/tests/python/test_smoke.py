import pytest

import sleepspike as ss


def test_names():
    assert "p256" in ss.curve_names()
    assert ss.engine_names() == ["w4_identity_table", "w4_qz_flag", "w6_booth"]


def test_engines_agree():
    n = ss.curve_order("p256")
    for k in (1, 2, 12345, n - 1):
        points = {ss.scalar_mul(k, "p256", e) for e in ss.engine_names()}
        assert len(points) == 1
    assert ss.scalar_mul(0) is None


def test_leading_zero_nibbles_are_quiet():
    recs = ss.activity(0xABC, "p256", "w4_qz_flag")
    assert len(recs) == 64
    assert all(r["hw_acc"] == 0 and r["acc_zero"] for r in recs[:61])
    assert recs[61]["hw_acc"] > 0


def test_rfc6979_sample():
    d = 0xC9AFA9D845BA75166B5C215767B1D6934E50C3DB36E89B127B8A622B120F6721
    sig = ss.sign(b"sample", d)
    assert sig["k"] == 0xA6E3C57DD01ABE90086538398355DD4C3B17AA873382B0F24D6129493D8AAD60
    assert sig["r"] == 0xEFD48B2AACB6A8FD1140DD9CD45E81D69D2C877B56AAF991C34D0EA84EAF3716
    assert ss.verify(b"sample", sig["r"], sig["s"], ss.public_key(d))
    assert not ss.verify(b"sample!", sig["r"], sig["s"], ss.public_key(d))


def test_keygen_and_injected_nonce():
    d, pub = ss.keygen("secp128r1", seed=3)
    assert (d, pub) == ss.keygen("secp128r1", seed=3)
    sig = ss.sign(b"m", d, "secp128r1", nonce=77)
    assert sig["k"] == 77
    assert ss.verify(b"m", sig["r"], sig["s"], pub, "secp128r1")
    with pytest.raises(ValueError):
        ss.sign(b"m", d, "secp128r1", nonce=0)


def test_simulate_and_figure():
    recs = ss.simulate("w4_qz_flag", traces=60, iterations=750, per_class=10, sigma=0.0, seed=1)
    assert len(recs) == 60
    assert {r["engine"] for r in recs} == {"w4_qz_flag"}
    pts = ss.figure(recs, "nibbles", 0)
    assert [p["z"] for p in pts] == list(range(6))
    means = [p["mean_spike"] for p in pts]
    assert all(a > b for a, b in zip(means, means[1:]))
    chosen = ss.select_low_spike(recs, ell=2, margin=1.0)
    assert len(chosen) == 15
    assert not any(c.startswith("0-") for c in chosen)


def test_moving_average():
    v = [0.0] * 30
    v[12] = 1.0
    f = ss.moving_average(v)
    assert len(f) == 21
    assert ss.extract_peak(f) == pytest.approx(0.1)
    with pytest.raises(ValueError):
        ss.moving_average([1.0] * 5)


def test_lll():
    rows = ss.lll_reduce([[201, 37], [1648, 297]])
    assert ss.is_lll_reduced(rows)
    assert not ss.is_lll_reduced([[201, 37], [1648, 297]])
    assert min(x * x + y * y for x, y in rows) <= 201 ** 2 + 37 ** 2


def test_oracle_attack():
    rep = ss.oracle_attack("secp128r1", ell=16, signatures=12, seed=4)
    assert rep["success"]
    assert rep["key"] == rep["expected_key"]
