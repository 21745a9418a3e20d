import pytest

from spherecover import quaternions as qt
from spherecover import spaceforms as sf
from spherecover.errors import SpecViolation


@pytest.fixture(scope="module")
def icosa_cert():
    cert = sf.build(sf.SpaceFormSpec(sf.ICOSAHEDRAL, m=1))
    sf.verify(cert)
    return cert


def test_cyclic_orders():
    for m, p in [(1, 1), (3, 1), (5, 2), (9, 4), (15, 2)]:
        cert = sf.build(sf.SpaceFormSpec(sf.CYCLIC, m=m, p=p))
        assert cert.pi.order == m


def test_tetrahedral_base_case_orders():
    cert = sf.build(sf.SpaceFormSpec(sf.TETRAHEDRAL, m=1, k=0))
    # the SO(4) group is the binary tetrahedral group; its Spin preimage doubles
    assert cert.pi.order == 24
    assert cert.pi_hat.order == 48


def test_icosahedral_base_case_orders(icosa_cert):
    assert icosa_cert.pi_hat.order == 240
    assert icosa_cert.pi.order == 120


def test_icosahedral_all_checks_pass(icosa_cert):
    assert icosa_cert.all_checks_pass()
    assert icosa_cert.abelianization.is_trivial()


def test_cyclic_5_2_checks_and_abelianization():
    cert = sf.build(sf.SpaceFormSpec(sf.CYCLIC, m=5, p=2))
    checks = sf.verify(cert)
    assert all(ok for ok, _ in checks.values())
    assert str(cert.abelianization) == "Z/5"


def test_spec_validation():
    with pytest.raises(SpecViolation):
        sf.SpaceFormSpec(sf.CYCLIC, m=4, p=1).validate()
    with pytest.raises(SpecViolation):
        sf.SpaceFormSpec(sf.CYCLIC, m=9, p=3).validate()
    with pytest.raises(SpecViolation):
        sf.SpaceFormSpec(sf.TETRAHEDRAL, m=2, k=0).validate()
    with pytest.raises(SpecViolation):
        sf.SpaceFormSpec(sf.TETRAHEDRAL, m=5, k=1).validate()
    with pytest.raises(SpecViolation):
        sf.SpaceFormSpec(sf.ICOSAHEDRAL, m=5).validate()
    with pytest.raises(SpecViolation):
        sf.build(sf.SpaceFormSpec(sf.CYCLIC, m=4, p=1))


def test_forced_even_m_fails_two_torsion_check():
    spec = sf.SpaceFormSpec(sf.CYCLIC, m=4, p=1)
    cert = sf.build(spec, allow_invalid=True)
    checks = sf.verify(cert)
    ok, detail = checks["2_no_two_torsion"]
    assert not ok
    assert "Z/4" in detail or "Z/2" in detail


def test_involution_square_and_circle(icosa_cert):
    iota = icosa_cert.iota_tilde
    assert (iota * iota).is_identity()
    assert qt.fixed_set(iota).kind == "circle"


def test_uniqueness_scan_cyclic():
    cert = sf.build(sf.SpaceFormSpec(sf.CYCLIC, m=3, p=1))
    sf.verify(cert)
    parts = sf.involution_uniqueness_scan(cert)
    assert len(parts) == 1
    assert cert.iota_tilde in parts[0]


def test_uniqueness_scan_rejects_identity():
    cert = sf.build(sf.SpaceFormSpec(sf.CYCLIC, m=3, p=1))
    sf.verify(cert)
    ident = qt.RotationClass(qt.spin_identity()).lift(cert.conductor)
    with pytest.raises(SpecViolation):
        sf.involution_uniqueness_scan(cert, candidates=[ident])


def test_uniqueness_scan_icosahedral(icosa_cert):
    parts = sf.involution_uniqueness_scan(icosa_cert)
    assert len(parts) == 1


def test_orders_reproducible():
    spec = sf.SpaceFormSpec(sf.TETRAHEDRAL, m=1, k=2)
    a = sf.build(spec)
    b = sf.build(spec)
    assert a.pi_hat.order == b.pi_hat.order
    assert a.pi.order == b.pi.order


def test_spin_to_so4_order_relation():
    # |Pi| = |Pi^|/2 exactly when -(1,1) is in the Spin-level group
    minus = qt.Spin4Element(-qt.quat_one(), -qt.quat_one())
    for spec in [
        sf.SpaceFormSpec(sf.CYCLIC, m=5, p=1),
        sf.SpaceFormSpec(sf.CYCLIC, m=5, p=2),
        sf.SpaceFormSpec(sf.TETRAHEDRAL, m=1, k=0),
        sf.SpaceFormSpec(sf.ICOSAHEDRAL, m=1),
    ]:
        cert = sf.build(spec)
        has_minus = minus.lift(cert.conductor) in cert.pi_hat
        if has_minus:
            assert cert.pi.order * 2 == cert.pi_hat.order
        else:
            assert cert.pi.order == cert.pi_hat.order


def test_certificate_report_lines(icosa_cert):
    lines = icosa_cert.report_lines()
    assert lines[0].startswith("spaceform: icosahedral")
    assert any("check[7_intersection_gcd]: pass" in l for l in lines)


def test_default_sweep_well_formed():
    specs = sf.default_sweep()
    assert len(specs) >= 12
    for spec in specs:
        spec.validate()
    families = {s.family for s in specs}
    assert families == {sf.CYCLIC, sf.TETRAHEDRAL, sf.ICOSAHEDRAL}
