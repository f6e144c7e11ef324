import cmath
import math
from math import factorial

import pytest


def post(client, route, payload, expect=200):
    r = client.post(route, json=payload)
    assert r.status_code == expect, (route, r.status_code, r.text[:500])
    return r.json()


@pytest.fixture(scope="module")
def uniform_doc(client):
    return post(client, "/moments",
                {"density": "indicator:0,1", "max_degree": 20, "exact": True})


@pytest.fixture(scope="module")
def gauss_doc():
    # exact e^{-z^2} characteristic data, s_{2k} = (2k)!/k!
    return {"dimension": 1, "max_degree": 120, "exact": True,
            "entries": [{"alpha": [k], "re": 0.0} for k in range(121)],
            "rationals": [{"alpha": [2 * k],
                           "num": factorial(2 * k) // factorial(k), "den": 1}
                          for k in range(61)]}


@pytest.fixture(scope="module")
def lebesgue_functional():
    return {"domain": [0.0, 1.0],
            "basis": [{"poly": [1]}, {"poly": [0, 1]}, {"poly": [0, 0, 1]}],
            "values": [1, "1/2", "1/3"]}


@pytest.fixture(scope="module")
def counterexample_functional():
    return {"domain": [0.0, 2.0],
            "basis": [{"poly": [1]}, {"poly": [0, 1]},
                      {"poly": [0, 0, 1], "overrides": [[1.0, -1.0]]}],
            "values": ["14/3", "14/3", 0]}


class TestMoments:
    def test_density_shorthand_exact(self, client):
        doc = post(client, "/moments",
                   {"density": "indicator:0,1", "max_degree": 6, "exact": True})
        assert doc["dimension"] == 1 and doc["max_degree"] == 6
        ent = {tuple(e["alpha"]): e["re"] for e in doc["entries"]}
        assert ent[(3,)] == pytest.approx(0.25, abs=1e-15)
        assert doc["exact"]
        assert any(r["num"] == 1 and r["den"] == 4 for r in doc["rationals"])

    def test_inline_density_dict(self, client):
        doc = post(client, "/moments",
                   {"density": {"kind": "gaussian", "mean": 0.0, "variance": 1.0},
                    "max_degree": 4})
        ent = {tuple(e["alpha"]): e["re"] for e in doc["entries"]}
        assert ent[(2,)] == pytest.approx(1.0, abs=1e-9)
        assert ent[(4,)] == pytest.approx(3.0, abs=1e-7)

    def test_no_null_fields_in_response(self, client):
        doc = post(client, "/moments",
                   {"density": "indicator:0,1", "max_degree": 2, "exact": False})
        assert "im" not in doc["entries"][0]
        assert "rationals" not in doc


class TestSequenceRoutes:
    def test_dseq_derivative_formula(self, client, uniform_doc):
        d = post(client, "/dseq", {"sequence": uniform_doc, "beta": 1})
        ent = {tuple(e["alpha"]): e["re"] for e in d["entries"]}
        # (ds)_2 = -2 s_1 = -1 for uniform
        assert ent[(2,)] == pytest.approx(-1.0, abs=1e-15)

    def test_hausdorff_uniform_bounded(self, client, uniform_doc):
        h = post(client, "/hausdorff", {"sequence": uniform_doc, "d_max": 6})
        assert h["classification"] == "bounded"
        assert h["sums"][-1] == pytest.approx(1.0, abs=1e-12)

    def test_abscont_uniform_positive(self, client, uniform_doc):
        a = post(client, "/abscont", {"sequence": uniform_doc, "d_max": 5})
        assert a["positive"] is True
        assert a["base"]["classification"] == "bounded"

    def test_cr_test_square_bump(self, client):
        bump = post(client, "/moments", {"density": "square-bump", "max_degree": 43})
        cr = post(client, "/cr-test", {"sequence": bump, "r": 1, "d_max": 40})
        assert cr["positive"] is True

    def test_mirror_verify_one_sided_continuous(self, client):
        tri = {"kind": "piecewise",
               "pieces": [{"lo": 0, "hi": "1/2", "coeffs": [0, "1/2", -1]}]}
        half = post(client, "/moments", {"density": tri, "max_degree": 42, "exact": True})
        mv = post(client, "/mirror-verify",
                  {"sequence": half, "components": {"+": half}, "r": 0, "d_max": 40})
        assert mv["positive"] is True
        assert mv["sum_defect"] <= 1e-12
        assert set(mv["per_sigma"]) == {"+"}


class TestCharfnRoutes:
    def test_charfn_uniform_closed_form(self, client, uniform_doc):
        c = post(client, "/charfn",
                 {"sequence": uniform_doc, "points": [0.0, 1.0], "tol": 1e-12})
        v0, v1 = c["values"]
        assert v0["re"] == pytest.approx(1.0, abs=1e-15) and abs(v0["im"]) < 1e-15
        ref = (cmath.exp(1j) - 1) / 1j
        assert v1["re"] == pytest.approx(ref.real, abs=1e-9)
        assert v1["im"] == pytest.approx(ref.imag, abs=1e-9)
        assert v1["reliable"] is True
        assert v1["backend"] in ("float", "exact", "mp")

    def test_radius_indicator(self, client):
        chi = post(client, "/moments", {"density": "indicator:-1,1", "max_degree": 24})
        rad = post(client, "/radius", {"sequence": chi, "k_min": 1, "k_max": 12})
        assert 0.8 < rad["estimate"] <= 1.1
        assert rad["trend"] == "converging"

    def test_bochner_seeded_random_points(self, client, gauss_doc):
        b = post(client, "/bochner",
                 {"sequence": gauss_doc, "random_count": 4, "box": [-1.5, 1.5],
                  "seed": 7})
        assert b["all_psd"] is True
        assert b["seed"] == 7
        assert len(b["points"]) == 4


class TestReconRoutes:
    def test_reconstruct_grid_spec(self, client, gauss_doc):
        r = post(client, "/reconstruct",
                 {"sequence": gauss_doc, "R": 3.0, "tol": 1e-4,
                  "grid_spec": {"start": -1.0, "stop": 1.0, "step": 0.5},
                  "nonneg_tol": 5e-3})
        assert len(r["grid"]) == 5
        assert r["grid"][0] == -1.0 and r["grid"][-1] == 1.0
        # inverse transform of e^{-z^2} at 0 is 1/(2 sqrt(pi))
        assert r["values"][2] == pytest.approx(1 / (2 * math.sqrt(math.pi)), abs=1e-3)
        assert r["nonnegativity"]["nonnegative"] is True

    def test_levy_point_mass(self, client):
        one = {"dimension": 1, "max_degree": 60,
               "entries": [{"alpha": [k], "re": 1.0} for k in range(61)]}
        lv = post(client, "/levy", {"sequence": one, "a": 0.5, "b": 1.5, "T": 10.0})
        assert lv["mass"] == pytest.approx(1.0, abs=0.2)

    def test_smooth_mass_point_mass(self, client):
        one = {"dimension": 1, "max_degree": 60,
               "entries": [{"alpha": [k], "re": 1.0} for k in range(61)]}
        sm = post(client, "/smooth-mass",
                  {"sequence": one, "x0": 1.0, "sigma": 0.5, "R": 12.0})
        phi = 1 / (0.5 * math.sqrt(2 * math.pi))
        assert sm["mass"] == pytest.approx(phi, abs=1e-4)


class TestRichterRoutes:
    def test_richter_lebesgue(self, client, lebesgue_functional):
        rich = post(client, "/richter",
                    {"functional": lebesgue_functional, "tol": 1e-10})
        assert rich["residual"] <= 1e-10
        assert len(rich["atoms"]) <= 3

    def test_smooth_returns_density_table(self, client, lebesgue_functional):
        smo = post(client, "/smooth",
                   {"functional": lebesgue_functional, "family": "gaussian",
                    "sigmas": [0.01], "tol": 1e-8,
                    "density_grid": [0.0, 0.5, 1.0]})
        assert smo["residual"] <= 1e-8
        assert all(a[2] > 0 for a in smo["atoms"])
        assert "atomic" in smo
        assert smo["density"]["grid"] == [0.0, 0.5, 1.0]
        assert len(smo["density"]["values"]) == 3

    def test_counterexample_atoms_include_override_point(self, client,
                                                         counterexample_functional):
        rce = post(client, "/richter",
                   {"functional": counterexample_functional, "tol": 1e-10})
        xs = sorted(round(x, 6) for x, c in rce["atoms"])
        assert xs == [0.0, 1.0, 2.0]

    def test_counterexample_smoothing_is_numerical_500(self, client,
                                                       counterexample_functional):
        err = post(client, "/smooth",
                   {"functional": counterexample_functional, "family": "gaussian",
                    "sigmas": [0.2, 0.1, 0.05, 0.01]}, expect=500)
        assert err["error"] == "SmoothingFailed"
        assert err["category"] == "numerical"


class TestErrorMapping:
    def test_unknown_density_is_400_input(self, client):
        err = post(client, "/moments",
                   {"density": "nosuchdensity", "max_degree": 4}, expect=400)
        assert err["category"] == "input"

    def test_dimension_mismatch_is_400(self, client):
        err = post(client, "/dseq",
                   {"sequence": {"dimension": 1, "max_degree": 2, "entries": []},
                    "beta": [1, 0]}, expect=400)
        assert err["error"] == "DimensionMismatch"

    def test_missing_field_is_422(self, client, uniform_doc):
        r = client.post("/hausdorff", json={"sequence": uniform_doc})
        assert r.status_code == 422

    def test_extra_field_is_422(self, client, uniform_doc):
        r = client.post("/hausdorff",
                        json={"sequence": uniform_doc, "d_max": 6, "bogus": 1})
        assert r.status_code == 422

    def test_infeasible_is_500(self, client):
        bad = {"domain": [0.0, 1.0], "basis": [{"poly": [1]}, {"poly": [0, 1]}],
               "values": [1, 2]}
        err = post(client, "/richter", {"functional": bad}, expect=500)
        assert err["error"] == "Infeasible"
