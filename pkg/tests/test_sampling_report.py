import json

import numpy as np
import pytest

import holobraid.sampling as sampling
from holobraid.dumps import dump_intertwiner, dump_rep_matrix, load_matrix
from holobraid.errors import SamplingExhaustedError
from holobraid.intertwiner import solve_intertwiner
from holobraid.cyclic import build_rep
from holobraid.report import emit_report, residual_entry
from holobraid.sampling import sample_params
from holobraid.suite import SuiteConfig, run_suite


class TestSampling:
    def test_deterministic(self, ctx3):
        a = sample_params(ctx3, 42, 7, count=2)
        b = sample_params(ctx3, 42, 7, count=2)
        assert all(p.as_tuple() == q.as_tuple() for p, q in zip(a, b))

    def test_trials_independent(self, ctx3):
        a = sample_params(ctx3, 42, 0, count=1)[0]
        b = sample_params(ctx3, 42, 1, count=1)[0]
        assert a.as_tuple() != b.as_tuple()

    def test_parameters_near_one(self, ctx3):
        (p,) = sample_params(ctx3, 13, 3, radius=0.05, count=1)
        for val in p.as_tuple():
            assert abs(np.log(val)) < 0.05 * np.sqrt(2) + 1e-12

    def test_low_rejection_rate(self, ctx3):
        # genericity failures are a measure-zero locus; count rejections
        # indirectly by checking many trials sample on the first attempt
        rejections = 0
        for i in range(200):
            rng = sampling.trial_rng(11, i)
            ps = tuple(sampling._draw_params(ctx3, rng, 0.1) for _ in range(2))
            if not sampling.is_generic(*ps):
                rejections += 1
        assert rejections / 200 < 0.05

    def test_exhaustion(self, ctx3, monkeypatch):
        monkeypatch.setattr(sampling, "is_generic", lambda *a, **k: False)
        with pytest.raises(SamplingExhaustedError):
            sample_params(ctx3, 1, 0, count=2)


class TestDumps:
    def test_rep_matrix_roundtrip(self, tmp_path, pair3):
        p = pair3[0]
        rep = build_rep(p)
        path = tmp_path / "K.tsv"
        dump_rep_matrix(path, rep.K, "K", p)
        meta, m = load_matrix(path)
        assert meta["kind"] == "K" and meta["ell"] == "3"
        assert np.max(np.abs(m - rep.K)) < 1e-15

    def test_intertwiner_header(self, tmp_path, pair3):
        intw = solve_intertwiner(*pair3)
        path = tmp_path / "R.tsv"
        dump_intertwiner(path, intw)
        meta, m = load_matrix(path)
        assert meta["kind"] == "R"
        assert meta["kernel_dim"] == "1"
        assert float(meta["residual"]) < 1e-9
        assert np.max(np.abs(m - intw.R)) < 1e-15


class TestReports:
    def test_residual_entry_digits(self):
        e = residual_entry(1.23456e-11)
        assert e["approx"] == "1.23e-11"
        assert e["value"] == 1.23456e-11

    def test_report_roundtrips_raw_doubles(self):
        blob = emit_report({"x": residual_entry(0.1 + 1e-17)})
        assert json.loads(blob)["x"]["value"] == 0.1 + 1e-17

    def test_suite_deterministic(self, tmp_path):
        cfg = dict(ell=3, trials=4, seed=5, route="both")
        _, rep1 = run_suite(SuiteConfig(**cfg))
        _, rep2 = run_suite(SuiteConfig(**cfg))
        rep1["generated_at"] = rep2["generated_at"] = "T"
        assert emit_report(rep1) == emit_report(rep2)

    def test_parallel_matches_serial(self):
        _, serial = run_suite(SuiteConfig(ell=3, trials=6, seed=9))
        _, parallel = run_suite(SuiteConfig(ell=3, trials=6, seed=9, threads=3))
        serial["generated_at"] = parallel["generated_at"] = "T"
        serial["config"]["threads"] = parallel["config"]["threads"] = None
        assert emit_report(serial) == emit_report(parallel)

    def test_exit_zero_and_file(self, tmp_path):
        path = tmp_path / "out.json"
        code, rep = run_suite(SuiteConfig(ell=3, trials=3, seed=2,
                                          report_path=str(path)))
        assert code == 0
        on_disk = json.loads(path.read_text())
        assert on_disk["summary"]["passed"] == 3
        assert len(on_disk["trials"]) == 3

    def test_dump_dir(self, tmp_path):
        d = tmp_path / "dumps"
        code, _ = run_suite(SuiteConfig(ell=3, trials=2, seed=2, dump_dir=str(d)))
        assert code == 0
        names = sorted(f.name for f in d.iterdir())
        assert names == ["trial0_E.tsv", "trial0_F.tsv", "trial0_K.tsv",
                         "trial0_L.tsv", "trial0_R.tsv"]

    def test_config_validation(self):
        with pytest.raises(ValueError):
            SuiteConfig(ell=4, trials=1, seed=0)
        with pytest.raises(ValueError):
            SuiteConfig(ell=3, trials=0, seed=0)
        with pytest.raises(ValueError):
            SuiteConfig(ell=3, trials=1, seed=0, radius=1.5)

    def test_thread_env_cap(self, monkeypatch):
        monkeypatch.setenv("HOLOBRAID_THREADS", "2")
        _, rep = run_suite(SuiteConfig(ell=3, trials=4, seed=9))
        _, ref = run_suite(SuiteConfig(ell=3, trials=4, seed=9, threads=1))
        rep["generated_at"] = ref["generated_at"] = "T"
        rep["config"]["threads"] = ref["config"]["threads"] = None
        assert emit_report(rep) == emit_report(ref)

    def test_empty_report_is_valid_json(self):
        from holobraid.report import new_report

        rep = new_report({"note": "empty"})
        rep["summary"] = {"trials": 0, "passed": 0, "failed": 0}
        parsed = json.loads(emit_report(rep))
        assert parsed["trials"] == []
        assert parsed["summary"]["trials"] == 0


def test_commutant_witness_certifies_irreducibility(ctx3, ctx5, ctx7):
    from holobraid.suite import commutant_dimension

    for ctx in (ctx3, ctx5, ctx7):
        (p,) = sample_params(ctx, 3, 1, count=1)
        assert commutant_dimension(p) == 1
