import json
import math
from pathlib import Path

import pytest

from ddpc.cli import (
    BOUND_CSV_HEADER,
    SWEEP_CSV_HEADER,
    ConfigError,
    main,
    parse_config,
)

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"


def write_config(tmp_path, **overrides):
    cfg = dict(
        n=2,
        T=4,
        L_values=[2],
        N_grid=[10, 20],
        trials=3,
        sigma_u=1.0,
        omega_scalar=0.5,
        q_weight=1.0,
        r_weight=1.0,
        y_ref=1.0,
        master_seed=3,
    )
    cfg.update(overrides)
    path = tmp_path / "config.json"
    path.write_text(json.dumps(cfg))
    return str(path)


class TestParseConfig:
    def test_shipped_fig1_matches_paper_setup(self):
        cfg = parse_config(str(CONFIG_DIR / "fig1.json"))
        assert cfg.n == 3
        assert cfg.T == 5
        assert cfg.L_values == (2, 3, 4)
        assert cfg.trials == 50
        assert cfg.omega_scalar == pytest.approx(math.sqrt(0.75))
        assert cfg.q_weight == 1.0 and cfg.r_weight == 1.0 and cfg.y_ref == 1.0

    def test_shipped_fig2_and_fig3_grids(self):
        fig2 = parse_config(str(CONFIG_DIR / "fig2.json"))
        assert fig2.t_grid == (4, 5, 6) and fig2.L_values == (2,)
        fig3 = parse_config(str(CONFIG_DIR / "fig3.json"))
        assert fig3.snr_grid == pytest.approx((1 / 3, 4 / 3, 16 / 3))

    def test_zero_trials_names_key(self, tmp_path):
        path = write_config(tmp_path, trials=0)
        with pytest.raises(ConfigError, match="trials"):
            parse_config(path)

    def test_unknown_key_rejected(self, tmp_path):
        path = write_config(tmp_path)
        raw = json.loads(Path(path).read_text())
        raw["horizonn"] = 4
        Path(path).write_text(json.dumps(raw))
        with pytest.raises(ConfigError, match="horizonn"):
            parse_config(path)

    def test_missing_key_rejected(self, tmp_path):
        path = write_config(tmp_path)
        raw = json.loads(Path(path).read_text())
        del raw["sigma_u"]
        Path(path).write_text(json.dumps(raw))
        with pytest.raises(ConfigError, match="sigma_u"):
            parse_config(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="cannot read"):
            parse_config(str(tmp_path / "nope.json"))

    def test_override_applies(self, tmp_path):
        path = write_config(tmp_path)
        cfg = parse_config(path, overrides=["trials=5"])
        assert cfg.trials == 5
        assert cfg.N_grid == (10, 20)

    def test_override_list_value(self, tmp_path):
        path = write_config(tmp_path)
        cfg = parse_config(path, overrides=["N_grid=[5, 15]"])
        assert cfg.N_grid == (5, 15)

    def test_override_unknown_key(self, tmp_path):
        path = write_config(tmp_path)
        with pytest.raises(ConfigError, match="bogus"):
            parse_config(path, overrides=["bogus=1"])


class TestMain:
    def test_sweep_n_writes_csv(self, tmp_path, capsys):
        cfg = write_config(tmp_path)
        out = tmp_path / "out.csv"
        assert main(["sweep-n", "--config", cfg, "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == SWEEP_CSV_HEADER
        # 2 grid points x (direct + indirect L=2)
        assert len(lines) == 1 + 2 * 2
        assert "[N-sweep]" in capsys.readouterr().out

    def test_sweep_t_and_snr(self, tmp_path):
        cfg = write_config(tmp_path, t_grid=[3, 4], snr_grid=[1.0, 4.0], N_grid=[10])
        out_t = tmp_path / "t.csv"
        out_s = tmp_path / "s.csv"
        assert main(["sweep-t", "--config", cfg, "--out", str(out_t)]) == 0
        assert main(["sweep-snr", "--config", cfg, "--out", str(out_s)]) == 0
        assert len(out_t.read_text().splitlines()) == 1 + 2 * 2
        assert len(out_s.read_text().splitlines()) == 1 + 2 * 2

    def test_theorem1_writes_table(self, tmp_path):
        cfg = write_config(tmp_path, trials=120, N_grid=[30])
        out = tmp_path / "thm.csv"
        assert main(["theorem1", "--config", cfg, "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == BOUND_CSV_HEADER
        assert len(lines) == 1 + 6

    def test_demo_runs(self, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        assert main(["demo"]) == 0
        assert (tmp_path / "demo_sweep.csv").exists()

    def test_config_error_exit_code(self, tmp_path):
        cfg = write_config(tmp_path, trials=0)
        out = tmp_path / "out.csv"
        assert main(["sweep-n", "--config", cfg, "--out", str(out)]) == 2
        assert not out.exists()

    def test_rerun_byte_identical(self, tmp_path):
        cfg = write_config(tmp_path)
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        main(["sweep-n", "--config", cfg, "--out", str(out1)])
        main(["sweep-n", "--config", cfg, "--out", str(out2), "--threads", "4"])
        assert out1.read_bytes() == out2.read_bytes()

    def test_csv_reals_have_full_precision(self, tmp_path):
        cfg = write_config(tmp_path)
        out = tmp_path / "out.csv"
        main(["sweep-n", "--config", cfg, "--out", str(out)])
        row = out.read_text().splitlines()[1].split(",")
        mean_gap = row[SWEEP_CSV_HEADER.split(",").index("mean_gap")]
        mantissa = mean_gap.split("e")[0].replace("-", "").replace(".", "")
        assert len(mantissa) >= 12
