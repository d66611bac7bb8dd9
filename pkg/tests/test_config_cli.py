import numpy as np
import pytest

from fhuplink import cli
from fhuplink.config import (ConfigError, RunConfig, build_topology,
                             config_sha256, parse_config, parse_config_text,
                             provenance_lines, serialize)


def test_empty_config_gives_defaults():
    cfg = parse_config_text("")
    assert cfg == RunConfig()
    # the standard parameter set
    assert cfg.zeta == 24
    assert cfg.hopset_channels // cfg.ref_block_channels == 10
    assert cfg.hopset_channels // cfg.sector_block_channels == 10
    assert cfg.mu_per_km == 20.0
    assert cfg.beta_db == 3.0
    assert cfg.delta == 0.1
    assert cfg.slot_ms == 0.5
    assert cfg.p_over_n_db == 70.0
    assert cfg.density_per_km2 == 100.0
    assert cfg.r_ex_km == 0.004
    assert cfg.d0_km == 0.004
    assert cfg.activity_prob == 1.0
    assert cfg.mobile_beamwidth_rad == pytest.approx(0.1 * np.pi)
    assert cfg.sidelobe_bs == 0.01 and cfg.sidelobe_mobile == 0.1
    assert cfg.dr0_km == 0.025 and cfg.k_strongest == 30


def test_delta_out_of_range_names_bounds():
    with pytest.raises(ConfigError, match=r"delta.*\[0, 1\]"):
        parse_config_text("delta: 1.5")


def test_unknown_and_duplicate_keys_report_line():
    with pytest.raises(ConfigError, match=r"unknown key 'turbo'.*line 2"):
        parse_config_text("delta = 0.2\nturbo = 5\n")
    with pytest.raises(ConfigError, match=r"duplicate key 'delta'.*line 3"):
        parse_config_text("delta = 0.2\n# fine\ndelta = 0.3\n")
    with pytest.raises(ConfigError, match="cannot parse"):
        parse_config_text("what even is this\n")
    with pytest.raises(ConfigError, match="zeta.*int"):
        parse_config_text("zeta = many")


def test_sections_comments_and_colon_syntax():
    cfg = parse_config_text("""
[propagation]
preset: austin        # Texas measurement set
mu_per_km = 15

[link]
beta_db: 6.0
""")
    assert cfg.preset == "austin"
    assert cfg.sigma_min_db == 4.6 and cfg.sigma_max_db == 12.3
    assert cfg.alpha_max == 3.3
    assert cfg.mu_per_km == 15.0 and cfg.beta_db == 6.0


def test_preset_with_explicit_override_any_order():
    a = parse_config_text("alpha_max = 5.0\npreset = austin\n")
    b = parse_config_text("preset = austin\nalpha_max = 5.0\n")
    assert a == b
    assert a.alpha_max == 5.0 and a.alpha_min == 1.9


def test_round_trip():
    cfg = parse_config_text("""
preset = austin
delta = 0.35
cm_ratios = 0.1,0.5,1
ref_zone_km = 0.75
topology = grid
bs_count = 36
trials = 123
seed = 99
""")
    again = parse_config_text(serialize(cfg))
    assert again == cfg
    assert parse_config_text(serialize(RunConfig())) == RunConfig()


def test_validation_errors():
    with pytest.raises(ConfigError, match="missing topology source"):
        parse_config_text("topology = file\n")
    with pytest.raises(ConfigError, match="divide"):
        parse_config_text("hopset_channels = 100\nref_block_channels = 7\n")
    with pytest.raises(ConfigError, match="one of"):
        parse_config_text("dr_mode = sometimes\n")
    with pytest.raises(ConfigError, match="ref_zone_km"):
        parse_config_text("ref_zone_km = 5.0\n")  # larger than the extent
    with pytest.raises(ConfigError, match="trials"):
        parse_config_text("trials = 0\n")


def test_parse_config_file(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("beta_db = 0.0\n")
    assert parse_config(path).beta_db == 0.0


def test_provenance_excludes_execution_details():
    cfg = RunConfig(seed=77, threads=8)
    lines = provenance_lines(cfg)
    joined = "\n".join(lines)
    assert "threads" not in joined and "seed" not in joined
    # hash ignores seed and threads but tracks physics parameters
    assert config_sha256(cfg) == config_sha256(RunConfig(seed=1, threads=1))
    assert config_sha256(cfg) != config_sha256(RunConfig(delta=0.2))


def test_build_topology_defaults_and_modes(tmp_path):
    cfg = RunConfig()
    t = build_topology(cfg, 7)
    assert t.n_bs == 132
    assert t.extent.area == pytest.approx(4.0)
    assert t.reference_zone.area == pytest.approx(1.0)  # central half-side
    assert t.sectors_per_bs == 24
    t2 = build_topology(cfg, 7)
    assert np.array_equal(t.bs_xy, t2.bs_xy)

    grid = build_topology(RunConfig(topology="grid", bs_count=9), 1)
    assert grid.n_bs == 9

    full = build_topology(RunConfig(ref_zone_km=0.0), 1)
    assert full.reference_zone == full.extent

    rand_psi = build_topology(RunConfig(psi_offsets="random"), 5)
    assert not np.all(rand_psi.sector_offsets == 0.0)

    # file mode round-trips through gen-topo output
    out = tmp_path / "bs.txt"
    assert cli.main(["gen-topo", "--kind", "uniform-random", "--count", "40",
                     "--extent", "1.5", "--seed", "4", "--out", str(out)]) == 0
    cfg_f = RunConfig(topology="file", topology_file=str(out), extent_km=1.5,
                      bs_count=40)
    tf = build_topology(cfg_f, 1)
    assert tf.n_bs == 40
    assert np.all(tf.extent.contains(tf.bs_xy))


SMALL_CFG = """
bs_count = 12
extent_km = 0.6
trials = 10
candidate_bs = 6
seed = 5
"""


def _write_cfg(tmp_path, text=SMALL_CFG):
    p = tmp_path / "small.cfg"
    p.write_text(text)
    return str(p)


def test_cli_campaign_deterministic(tmp_path):
    cfg = _write_cfg(tmp_path)
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    assert cli.main(["campaign", "--config", cfg, "--seed", "7",
                     "--out", str(out1)]) == 0
    assert cli.main(["campaign", "--config", cfg, "--seed", "7",
                     "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    text = out1.read_text()
    assert "# seed = 7" in text
    assert "# config_sha256 = " in text
    assert "epsilon_bar" in text
    # a different seed changes the results
    out3 = tmp_path / "c.csv"
    assert cli.main(["campaign", "--config", cfg, "--seed", "8",
                     "--out", str(out3)]) == 0
    assert out3.read_bytes() != out1.read_bytes()


def test_cli_campaign_header_reproducible(tmp_path):
    # the config echoed in the header reproduces the run
    cfg = _write_cfg(tmp_path)
    out = tmp_path / "a.csv"
    assert cli.main(["campaign", "--config", cfg, "--seed", "7",
                     "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    echoed = [ln[len("#   "):] for ln in lines if ln.startswith("#   ")]
    cfg2 = _write_cfg(tmp_path, "\n".join(echoed) + "\n")
    out2 = tmp_path / "b.csv"
    assert cli.main(["campaign", "--config", cfg2, "--seed", "7",
                     "--out", str(out2)]) == 0
    assert out2.read_bytes() == out.read_bytes()


def test_cli_densify_rows(tmp_path):
    cfg = _write_cfg(tmp_path)
    out = tmp_path / "d.csv"
    assert cli.main(["densify", "--config", cfg, "--ratios", "0.5,1",
                     "--trials", "5", "--out", str(out)]) == 0
    rows = [ln for ln in out.read_text().splitlines()
            if ln and not ln.startswith("#")]
    assert rows[0].startswith("cm_ratio,")
    assert len(rows) == 3
    assert rows[1].split(",")[0] == "0.5"


def test_cli_sweep_and_links(tmp_path):
    cfg = _write_cfg(tmp_path)
    out = tmp_path / "s.csv"
    assert cli.main(["sweep", "--config", cfg, "--axis", "delta",
                     "--values", "0,1", "--ratios", "1", "--trials", "4",
                     "--out", str(out)]) == 0
    lines = [ln for ln in out.read_text().splitlines()
             if ln and not ln.startswith("#")]
    assert len(lines) == 3 and lines[0].startswith("axis,value,")

    out2 = tmp_path / "l.csv"
    assert cli.main(["links", "--config", cfg, "--links", "3",
                     "--beta-db", "0,6", "--out", str(out2)]) == 0
    body = [ln for ln in out2.read_text().splitlines()
            if ln and not ln.startswith("#")]
    assert len(body) == 1 + 2 * 4  # header + (3 links + average) per beta


def test_cli_validate(tmp_path, capsys):
    out = tmp_path / "v.csv"
    code = cli.main(["validate", "--profiles", "4", "--samples", "4000",
                     "--seed", "2", "--out", str(out)])
    captured = capsys.readouterr()
    assert code == 0
    assert "4/4 within 4 standard errors" in captured.out
    assert out.exists()


def test_cli_error_reporting(tmp_path, capsys):
    bad = tmp_path / "bad.cfg"
    bad.write_text("delta = 3\n")
    assert cli.main(["campaign", "--config", str(bad)]) == 2
    assert "delta" in capsys.readouterr().err


def test_cli_env_overrides(tmp_path, monkeypatch):
    cfg = _write_cfg(tmp_path)
    out1, out2 = tmp_path / "e1.csv", tmp_path / "e2.csv"
    monkeypatch.setenv("FHUPLINK_SEED", "31")
    assert cli.main(["campaign", "--config", cfg, "--out", str(out1)]) == 0
    assert "# seed = 31" in out1.read_text()
    # explicit flag beats the environment
    assert cli.main(["campaign", "--config", cfg, "--seed", "32",
                     "--out", str(out2)]) == 0
    assert "# seed = 32" in out2.read_text()
