import csv
import json
import math

import numpy as np
import pytest

from nmqwalk.cli import main, parse_config
from nmqwalk.exceptions import ConfigError
from nmqwalk.noise import OunParams, RtnParams


def read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


def write_config(tmp_path, doc, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return path


class TestParseConfig:
    def test_empty_document_gives_defaults(self):
        cfg = parse_config("{}")
        assert cfg.walk.steps == 100
        assert cfg.walk.coin_angle == pytest.approx(math.pi / 4)
        assert cfg.walk.delta == pytest.approx(math.pi / 4)
        assert cfg.walk.eta == 0.0
        assert cfg.mode == "one_shot"
        assert cfg.noise is None
        assert cfg.spectral == {"family": "exponential", "min_prominence": 0.05}

    def test_angles_converted_from_degrees(self):
        cfg = parse_config('{"walk": {"coin_angle": 90.0}, "td_pair": [30, 0, -30, 0]}')
        assert cfg.walk.coin_angle == pytest.approx(math.pi / 2)
        assert cfg.td_pair[0] == pytest.approx(math.pi / 6)

    def test_noise_models_parsed(self):
        cfg = parse_config('{"noise": {"model": "rtn", "a": 0.08, "gamma": 0.001}}')
        assert cfg.noise == RtnParams(a=0.08, gamma=0.001)
        cfg = parse_config('{"noise": {"model": "oun", "Gamma": 1.0, "gamma": 5.0}}')
        assert cfg.noise == OunParams(Gamma=1.0, gamma=5.0)

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigError, match="unknown key"):
            parse_config('{"walks": {}}')
        with pytest.raises(ConfigError, match="unknown key"):
            parse_config('{"walk": {"step": 10}}')

    def test_range_error_on_negative_gamma(self):
        with pytest.raises(ConfigError, match="gamma"):
            parse_config('{"noise": {"model": "rtn", "a": 0.1, "gamma": -1}}')

    def test_type_errors_name_offending_key(self):
        with pytest.raises(ConfigError, match="walk.steps"):
            parse_config('{"walk": {"steps": "many"}}')
        with pytest.raises(ConfigError, match="td_pair"):
            parse_config('{"td_pair": [1, 2, 3]}')
        with pytest.raises(ConfigError, match="witness"):
            parse_config('{"witnesses": ["Concurrence"]}')

    def test_invalid_json_rejected(self):
        with pytest.raises(ConfigError, match="JSON"):
            parse_config("{not json}")

    def test_echo_round_trips(self):
        text = (
            '{"walk": {"steps": 7, "eta": 15.0},'
            ' "noise": {"model": "pln", "Gamma": 5.0, "gamma": 0.05},'
            ' "witnesses": ["MI", "Entropy"]}'
        )
        cfg = parse_config(text)
        again = parse_config(json.dumps(cfg.echo))
        assert again.walk == cfg.walk
        assert again.noise == cfg.noise
        assert again.witnesses == cfg.witnesses
        assert again.echo == cfg.echo


class TestWalkCommand:
    def test_outputs_and_known_values(self, tmp_path):
        cfg = write_config(tmp_path, {"walk": {"steps": 6}})
        out = tmp_path / "out"
        assert main(["walk", "--config", str(cfg), "--out", str(out)]) == 0
        header, rows = read_csv(out / "variance.csv")
        assert header == ["step", "variance"]
        by_step = {int(r[0]): float(r[1]) for r in rows}
        assert by_step[2] == pytest.approx(1.0, abs=1e-12)

        header, rows = read_csv(out / "distribution.csv")
        assert header == ["step", "x", "probability"]
        step0 = [r for r in rows if r[0] == "0"]
        assert step0 == [["0", "0", "1"]]

    def test_markovian_noise_slows_spread(self, tmp_path):
        out_free = tmp_path / "free"
        out_noisy = tmp_path / "noisy"
        cfg_free = write_config(tmp_path, {"walk": {"steps": 40}}, "free.json")
        # stepwise mode: noise interleaved with the walk decoheres the
        # spread (one-shot coin dephasing cannot change position marginals)
        cfg_noisy = write_config(
            tmp_path,
            {
                "walk": {"steps": 40},
                "noise": {"model": "rtn", "a": 1.0, "gamma": 7.0},
                "mode": "stepwise",
            },
            "noisy.json",
        )
        assert main(["walk", "--config", str(cfg_free), "--out", str(out_free)]) == 0
        assert main(["walk", "--config", str(cfg_noisy), "--out", str(out_noisy)]) == 0

        def loglog_slope(path):
            _, rows = read_csv(path / "variance.csv")
            t = np.array([float(r[0]) for r in rows])
            v = np.array([float(r[1]) for r in rows])
            mask = t >= 10
            return np.polyfit(np.log(t[mask]), np.log(v[mask]), 1)[0]

        assert loglog_slope(out_noisy) < loglog_slope(out_free) < 2.1

    def test_byte_identical_reruns(self, tmp_path):
        cfg = write_config(tmp_path, {"walk": {"steps": 10}})
        out1, out2 = tmp_path / "a", tmp_path / "b"
        main(["walk", "--config", str(cfg), "--out", str(out1)])
        main(["walk", "--config", str(cfg), "--out", str(out2)])
        for name in ("distribution.csv", "variance.csv"):
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes()

    def test_lf_line_endings_and_float_format(self, tmp_path):
        cfg = write_config(tmp_path, {"walk": {"steps": 4}})
        out = tmp_path / "out"
        main(["walk", "--config", str(cfg), "--out", str(out)])
        raw = (out / "distribution.csv").read_bytes()
        assert b"\r" not in raw
        _, rows = read_csv(out / "distribution.csv")
        for row in rows:
            assert float(row[2]) <= 1.0  # parses back at full precision


class TestWitnessCommand:
    def test_per_tag_files_and_metadata(self, tmp_path):
        cfg = write_config(
            tmp_path,
            {
                "walk": {"steps": 8},
                "noise": {"model": "rtn", "a": 0.08, "gamma": 0.01},
                "witnesses": ["MID", "QD", "MI"],
            },
        )
        out = tmp_path / "out"
        assert main(["witness", "--config", str(cfg), "--out", str(out)]) == 0
        _, mid_rows = read_csv(out / "mid.csv")
        _, qd_rows = read_csv(out / "qd.csv")
        _, mi_rows = read_csv(out / "mi.csv")
        assert float(mi_rows[0][1]) == pytest.approx(0.0, abs=1e-9)
        for (_, qd), (_, mid) in zip(qd_rows, mid_rows):
            assert float(qd) <= float(mid) + 1e-6
        meta = json.loads((out / "metadata.json").read_text())
        assert meta["config"]["walk"]["steps"] == 8
        assert "generated_at" in meta

    def test_td_series_has_a_rise(self, tmp_path):
        cfg = write_config(tmp_path, {"walk": {"steps": 20}, "witnesses": ["TD"]})
        out = tmp_path / "out"
        assert main(["witness", "--config", str(cfg), "--out", str(out)]) == 0
        _, rows = read_csv(out / "td.csv")
        values = np.array([float(r[1]) for r in rows])
        assert np.any(np.diff(values) > 1e-9)


class TestChoiCommand:
    def test_rtn_non_markovian_has_negative_lambda3(self, tmp_path):
        cfg = write_config(
            tmp_path,
            {
                "noise": {"model": "rtn", "a": 0.9, "gamma": 0.05},
                "choi": {"t1": 1.0, "t2_max": 20.0, "dt": 0.1},
            },
        )
        out = tmp_path / "out"
        assert main(["choi", "--config", str(cfg), "--out", str(out)]) == 0
        header, rows = read_csv(out / "choi.csv")
        assert header == ["t2", "lambda3", "lambda4", "is_cp", "invertible"]
        l3 = np.array([float(r[1]) for r in rows])
        assert np.any(l3 < 0)
        assert any(r[3] == "false" for r in rows)

    def test_oun_fully_cp(self, tmp_path):
        cfg = write_config(
            tmp_path,
            {
                "noise": {"model": "oun", "Gamma": 1.0, "gamma": 5.0},
                "choi": {"t1": 1.0, "t2_max": 20.0, "dt": 0.1},
            },
        )
        out = tmp_path / "out"
        assert main(["choi", "--config", str(cfg), "--out", str(out)]) == 0
        _, rows = read_csv(out / "choi.csv")
        assert all(r[3] == "true" and r[4] == "true" for r in rows)

    def test_noiseless_config_rejected(self, tmp_path):
        cfg = write_config(tmp_path, {})
        assert main(["choi", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 2


class TestSpectrumCommand:
    def write_series(self, tmp_path, values):
        path = tmp_path / "series.csv"
        lines = ["step,value"] + [f"{t},{float(v)!r}" for t, v in enumerate(values)]
        path.write_text("\n".join(lines) + "\n")
        return path

    def test_two_tone_input(self, tmp_path):
        t = np.arange(64)
        y = (
            np.exp(-0.05 * t)
            + 0.1 * np.cos(2 * np.pi * 0.25 * t)
            + 0.05 * np.cos(2 * np.pi * 0.03125 * t)
        )
        src = self.write_series(tmp_path, y)
        out = tmp_path / "out"
        cfg = write_config(tmp_path, {})
        code = main(
            ["spectrum", "--config", str(cfg), "--input", str(src), "--out", str(out)]
        )
        assert code == 0
        peaks = json.loads((out / "peaks.json").read_text())
        assert len(peaks) == 2
        assert peaks[0]["relative_power"] == 1.0
        assert peaks[0]["power"] >= peaks[1]["power"]
        for name in ("fit.csv", "residual.csv", "spectrum.csv"):
            header, rows = read_csv(out / name)
            assert len(rows) > 0

    def test_constant_input_empty_peaks(self, tmp_path):
        src = self.write_series(tmp_path, [0.5] * 16)
        out = tmp_path / "out"
        cfg = write_config(tmp_path, {})
        code = main(
            ["spectrum", "--config", str(cfg), "--input", str(src), "--out", str(out)]
        )
        assert code == 0
        assert json.loads((out / "peaks.json").read_text()) == []

    def test_malformed_csv_reports_line(self, tmp_path, capsys):
        path = tmp_path / "bad.csv"
        path.write_text("step,value\n0,1.0\n1,oops\n")
        cfg = write_config(tmp_path, {})
        code = main(
            [
                "spectrum",
                "--config",
                str(cfg),
                "--input",
                str(path),
                "--out",
                str(tmp_path / "o"),
            ]
        )
        assert code == 2
        assert "line 3" in capsys.readouterr().err


class TestExitCodes:
    def test_schema_error_is_2(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {"mode": "retrocausal"})
        assert main(["walk", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 2

    def test_missing_config_is_4(self, tmp_path):
        missing = tmp_path / "nope.json"
        assert main(["walk", "--config", str(missing), "--out", str(tmp_path / "o")]) == 4

    def test_numerical_failure_is_3(self, tmp_path):
        # starting on the lattice boundary trips the edge guard
        cfg = write_config(tmp_path, {"walk": {"steps": 4, "initial_position": 5}})
        assert main(["walk", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 3
