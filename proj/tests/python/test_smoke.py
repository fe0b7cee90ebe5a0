import json
import math

import pytest

import et14


@pytest.fixture(scope="module")
def exp_family():
    return et14.family("exponential")


def test_k_pq_row_one(exp_family):
    assert et14.k_pq(exp_family, 1, 0) == pytest.approx(-43.400821516743, rel=1e-12)
    assert et14.k00(exp_family) == pytest.approx(28.933881011162, rel=1e-12)


def test_parity_zeros(exp_family):
    assert et14.h_pqr(exp_family, 1, 0, 0) == 0.0
    assert et14.phi_pqr(exp_family, 2, 0, 1) == 0.0


def test_negative_lambda_ll_is_a_domain_error(exp_family):
    with pytest.raises(et14.DomainError, match="positive"):
        et14.k_pq(exp_family, 0, 0, lambda_ll=-1.0)


def test_custom_family_gate_rejects_broken_ladder():
    def member(s, n, lam):
        return math.exp(-lam) * (s + 1)

    with pytest.raises(et14.FamilyError):
        et14.custom_family("broken", member, 3, 4)


def test_equilibrium_flux_vanishes(exp_family):
    pot = et14.eval_potentials(exp_family, et14.equilibrium_state(0.2, 1.5))
    assert pot["h"] == pytest.approx(et14.k00(exp_family, 0.2, 1.5))
    assert pot["phi"] == [0.0, 0.0, 0.0]


def test_boost_with_zero_velocity_is_identity(exp_family):
    rest = et14.moments(exp_family, et14.equilibrium_state(0.1, 2.0))
    lab = et14.lab_moments_from_rest(rest, [0.0, 0.0, 0.0])
    rest.pop("frame")
    lab.pop("frame")
    assert lab == rest


def test_kinetic_matches_series(exp_family):
    quad = et14.kinetic_kpq("exponential", 2, 1, 0.3, 1.7)
    series = et14.k_pq(exp_family, 2, 1, 0.3, 1.7, 0.0, 1)
    assert quad == pytest.approx(series, rel=1e-7)


def test_subsystem_c_is_zero(exp_family):
    I, c = et14.reduce_to_13(exp_family, 4)
    assert sorted(I) == [0, 2, 4]
    assert all(v == 0.0 for v in c.values())


def test_verify_report(exp_family):
    report = et14.verify("exponential")
    assert report["summary"]["all_passed"]
    faulty = et14.verify("faulty-exponential")
    assert "ladder" in faulty["summary"]["failing_ids"]


def test_cli_exit_codes():
    code, out, _ = et14.run_cli(["coeffs", "--format", "csv"])
    assert code == 0
    assert out.splitlines()[0] == "p,q,S,lambda,lambda_ll,lambda_ppqq,value"
    code, _, err = et14.run_cli(["coeffs", "--family", "nope"])
    assert code == 2 and "family" in err
    code, out, _ = et14.run_cli(["subsystem"])
    assert code == 0 and json.loads(out)["meta"]["command"] == "subsystem"
