import csv
import io
import math

import numpy as np
import pytest

from hbtphase.config import RunConfig, validate
from hbtphase.errors import CapacityError, DegenerateError
from hbtphase.sweeps import CSV_HEADER, SweepRowError, run_sweep, to_csv


def rows(config):
    return list(csv.DictReader(io.StringIO(to_csv(run_sweep(validate(config))))))


def test_phi_sweep_spans_fringe():
    table = rows(RunConfig(sweep_start=0.0, sweep_stop=math.pi, sweep_step=math.pi / 64))
    assert len(table) == 64
    c = np.array([float(r["engine"]) for r in table])
    assert c.min() >= 1 - 1e-12 and c.max() <= 2 + 1e-12
    assert c.max() - c.min() == pytest.approx(1.0, abs=1e-3)
    assert float(table[int(np.argmax(c))]["value"]) == 0.0
    assert all(float(r["abs_dev"]) <= 1e-9 for r in table)


def test_baseline_sweep_period():
    cfg = RunConfig(sweep="detector_separation", phi3=0.3)
    table = rows(cfg)
    d = np.array([float(r["value"]) for r in table])
    c = np.array([float(r["engine"]) for r in table])
    period = cfg.wavelength * cfg.distance / cfg.source_separation
    fit = np.polyfit(np.cos(2 * math.pi * d / period - 0.6), c, 1)
    assert np.allclose(fit, [0.5, 1.5], atol=1e-9)


def test_csv_schema_and_formatting():
    text = to_csv(run_sweep(validate(RunConfig(experiment="entanglement", sweep="omega"))))
    lines = text.splitlines()
    assert lines[0] == ",".join(CSV_HEADER)
    for line in lines[1:]:
        fields = line.split(",")
        assert len(fields) == 6 and fields[3] == fields[4] == fields[5] == ""
        assert len(fields[2].replace(".", "").lstrip("0")) <= 12


def test_oracle_column():
    table = rows(RunConfig(oracle=True, nmax=5, sweep_start=0.0, sweep_stop=1.0, sweep_step=0.5))
    for r in table:
        assert float(r["oracle"]) == pytest.approx(float(r["engine"]), rel=1e-3)


def test_three_slit_sweep_varies_with_rotation():
    table = rows(RunConfig(experiment="three-slit", sweep="rotation"))
    c = np.array([float(r["engine"]) for r in table])
    assert len(table) == 36 and np.ptp(c) > 0.1


def test_deviation_beyond_tolerance_is_reported():
    result = run_sweep(validate(RunConfig(distance=10.0, propagation="exact", sweep="detector_separation",
                                          sweep_start=0.0, sweep_stop=0.1, sweep_step=0.05)))
    assert result.failures


def test_degenerate_row_has_context():
    with pytest.raises(SweepRowError, match="phi34=0.0"):
        run_sweep(validate(RunConfig(n_b=(0.0,))))
    assert issubclass(SweepRowError, DegenerateError)


def test_oracle_capacity_error():
    with pytest.raises(CapacityError):
        run_sweep(validate(RunConfig(experiment="three-slit", sweep="rotation", oracle=True, nmax=8)))
