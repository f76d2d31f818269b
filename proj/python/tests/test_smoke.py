import json
import math
from pathlib import Path

import pytest

import phonobath as pb

DATA = Path(__file__).resolve().parents[2] / "data"
GOLD = [(2.11, 1.3, 1.0), (4.05, 0.56, 0.15)]


def test_lorentzian_dos_at_peak():
    m = pb.LorentzianSum([(5.0, 2.0, 3.0)])
    # W / Gamma at omega0, Gamma in rad/ps
    assert pb.dos(m, [5.0])[0] == pytest.approx(3.0 / (2 * math.pi * 2.0), rel=1e-14)
    assert len(m) == 1
    assert m.ratios == [1.0]


def test_debye_classification():
    for dim, cls, s in [(3, "ohmic", 1.0), (2, "sub_ohmic", 0.0), (1, "sub_ohmic", -1.0)]:
        r = pb.classify(pb.Debye(1.466, 3.54, dim), pb.Coupling())
        assert r["class"] == cls
        assert r["s"] == pytest.approx(s, abs=1e-3)


def test_coupling_identity():
    m = pb.LorentzianSum(GOLD)
    nus = [0.5, 2.11, 6.0]
    d = pb.dos(m, nus)
    c = pb.coupling(m, pb.Coupling(g=1.3), nus)
    for di, ci in zip(d, c):
        assert ci * ci == pytest.approx(1.3**2 * di / 3, rel=1e-13)
    j = pb.spectral_density(m, pb.Coupling(g=1.3), nus)
    assert j[0] == pytest.approx(c[0] ** 2 / (2 * math.pi * 0.5), rel=1e-13)


def test_coupling_tensor():
    spec = pb.Coupling(g=2.0, system_dim=2, bath_dim=3, polarization=[[0.7, 0.1], [0.1, 0.3]])
    c = pb.coupling_tensor(0.5, spec, 1.0)
    assert c.shape == (2, 3)
    cct = c @ c.T
    assert cct[0][0] == pytest.approx(4.0 * 0.5 * 0.7, rel=1e-12)
    assert cct[0][1] == pytest.approx(4.0 * 0.5 * 0.1, rel=1e-12)


def test_kernel_methods_agree():
    m = pb.LorentzianSum(GOLD)
    taus = [0.01 * i for i in range(1, 101)]
    a, wa = pb.kernel(m, pb.Coupling(), taus, method="analytic")
    q, wq = pb.kernel(m, pb.Coupling(), taus)
    assert wa == [] and wq == []
    scale = max(abs(x) for x in a)
    assert max(abs(x - y) for x, y in zip(a, q)) <= 1e-6 * scale
    times, dominant = pb.memory_times(m)
    assert 0.1 <= dominant <= 0.3
    assert len(times) == 2


def test_analytic_kernel_unsupported_for_tables():
    t = pb.Tabulated([1.0, 2.0, 3.0], [0.1, 0.4, 0.2])
    with pytest.raises(pb.UnsupportedError):
        pb.kernel(t, pb.Coupling(), [0.1], method="analytic")
    with pytest.raises(ValueError):
        pb.kernel(t, pb.Coupling(), [0.1], method="fourier")


def test_fit_round_trip():
    truth = pb.LorentzianSum(GOLD)
    nus = [0.05 + 7.95 * i / 299 for i in range(300)]
    data = pb.Tabulated(nus, pb.dos(truth, nus))
    r = pb.fit(data, 2, seed=3)
    assert r["converged"]
    assert r["ratios"][1] == pytest.approx(0.15, rel=1e-6)
    assert r["peaks"][0]["nu0_thz"] == pytest.approx(2.11, rel=1e-6)
    hist = r["cost_history"]
    assert all(b <= a for a, b in zip(hist, hist[1:]))
    assert isinstance(r["model"], pb.LorentzianSum)


def test_ingest_and_documents(tmp_path):
    table = pb.ingest((DATA / "gold_dos_synthetic.csv").read_text(), unit="meV")
    assert len(table) == 240
    model, spec = pb.load(DATA / "gold_2peak.json")
    assert isinstance(model, pb.LorentzianSum)
    assert spec.system_dim == 3
    text = pb.dumps(model, spec, "smoke")
    doc = json.loads(text)
    assert doc["kind"] == "lorentzian_sum"
    again, _ = pb.loads(text)
    assert again.peaks == model.peaks
    with pytest.raises(ValueError):
        pb.loads("{")


def test_calibration_and_positivity():
    yig1 = pb.LorentzianSum([(5.91, 12.4, 1.0)])
    a1, scaled, slope = pb.calibrate(yig1, pb.Coupling(), eta=5e-4, gamma_e=28e9)
    a2, _, _ = pb.calibrate(yig1, pb.Coupling(), eta=1e-3, gamma_e=28e9)
    assert a2 == pytest.approx(2 * a1, rel=1e-12)
    assert slope > 0
    assert pb.validate_positivity(scaled, 0.01, 25.0)["ok"]


def test_errors_map_to_python():
    with pytest.raises(ValueError):
        pb.Debye(1.0, 3.0, 4)
    with pytest.raises(TypeError):
        pb.dos("gold", [1.0])
    assert pb.debye_cutoff_from_temperature(420.0) == pytest.approx(8.75138003715972, rel=1e-12)
