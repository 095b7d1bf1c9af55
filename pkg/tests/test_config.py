import numpy as np
import pytest

from slantbeam.config import ConfigError, config_hash, parse_config, serialize_config

DEG = np.pi / 180.0


class TestDefaults:
    def test_empty_parse_gives_full_scale_defaults(self):
        cfg = parse_config()
        assert cfg.get("array", "carrier_freq_ghz") == 60.0
        assert cfg.get("array", "bandwidth_ghz") == 2.0
        assert cfg.get("array", "num_subcarriers") == 1200
        assert cfg.get("array", "num_antennas") == 32
        assert cfg.get("mobility", "num_users") == 3
        assert cfg.get("frame", "duration_ms") == 160.0
        assert cfg.get("frame", "num_steps") == 100
        assert cfg.get("design", "coverage_p") == 0.97
        assert cfg.get("sweep", "trials") == 100

    def test_desk_overlay(self):
        cfg = parse_config(desk=True)
        assert cfg.get("array", "num_subcarriers") == 240
        assert cfg.get("frame", "num_steps") == 25
        assert cfg.get("sweep", "trials") == 20
        assert cfg.get("sweep", "offset_count") == 25
        # untouched keys keep full-scale values
        assert cfg.get("array", "num_antennas") == 32

    def test_file_beats_overlay(self):
        cfg = parse_config(text="[array]\nnum_subcarriers = 480\n", desk=True)
        assert cfg.get("array", "num_subcarriers") == 480

    def test_inline_comments_ignored(self):
        text = "[link]\nchannel_gains = 1.0, 0.5   ; per user\nsnr_db = -7.0  # quiet\n"
        cfg = parse_config(text=text)
        assert cfg.get("link", "channel_gains") == (1.0, 0.5)
        assert cfg.get("link", "snr_db") == -7.0

    def test_materialized_types(self):
        cfg = parse_config()
        arr = cfg.array()
        assert arr.carrier_freq == 60e9
        assert arr.num_subcarriers == 1200
        scen = cfg.scenario()
        assert scen.var_theta == pytest.approx(2 * DEG**2)
        assert scen.velocity_range[1] == pytest.approx(80 * DEG)
        assert cfg.timing().duration == pytest.approx(0.16)
        assert cfg.budget().snr_db == -10.0
        base = cfg.base_trial()
        assert base.plan.offset_count == 100
        assert base.qpd_peak == pytest.approx(np.pi)
        assert base.range_override is None


class TestOverrides:
    def test_set_single_key(self):
        cfg = parse_config(overrides=["array.num_antennas=64"])
        assert cfg.get("array", "num_antennas") == 64
        assert cfg.get("array", "num_subcarriers") == 1200

    def test_set_list_and_optional(self):
        cfg = parse_config(overrides=[
            "sweep.values=0,10,20",
            "design.range_override_deg=20",
            "sweep.beams=slanted,stepped",
        ])
        assert cfg.get("sweep", "values") == (0.0, 10.0, 20.0)
        assert cfg.get("design", "range_override_deg") == 20.0
        assert cfg.get("sweep", "beams") == ("slanted", "stepped")
        assert cfg.base_trial().range_override == pytest.approx(20 * DEG)

    def test_set_beats_file(self):
        cfg = parse_config(text="[frame]\nnum_steps = 7\n", overrides=["frame.num_steps=9"])
        assert cfg.get("frame", "num_steps") == 9

    def test_malformed_override(self):
        with pytest.raises(ConfigError, match="section.key=value"):
            parse_config(overrides=["num_antennas=64"])


class TestRejections:
    def test_unknown_key_named(self):
        with pytest.raises(ConfigError, match=r"\[array\] warp_factor"):
            parse_config(text="[array]\nwarp_factor = 9\n")

    def test_unknown_section(self):
        with pytest.raises(ConfigError, match=r"\[engine\]"):
            parse_config(text="[engine]\npower = 1\n")

    def test_type_mismatch_named(self):
        with pytest.raises(ConfigError, match=r"\[frame\] num_steps"):
            parse_config(text="[frame]\nnum_steps = many\n")

    def test_zero_steps_rejected(self):
        with pytest.raises(ConfigError, match=r"\[frame\] num_steps"):
            parse_config(overrides=["frame.num_steps=0"])

    def test_bad_axis(self):
        with pytest.raises(ConfigError, match=r"\[sweep\] axis"):
            parse_config(overrides=["sweep.axis=carrier"])

    def test_unsorted_values(self):
        with pytest.raises(ConfigError, match=r"\[sweep\] values"):
            parse_config(overrides=["sweep.values=5,1"])

    def test_unknown_beam(self):
        with pytest.raises(ConfigError, match=r"\[sweep\] beams"):
            parse_config(overrides=["sweep.beams=slanted,psycho"])

    def test_coverage_out_of_range(self):
        with pytest.raises(ConfigError, match=r"\[design\] coverage_p"):
            parse_config(overrides=["design.coverage_p=1.5"])


class TestRoundTrip:
    def test_defaults_round_trip(self):
        cfg = parse_config()
        again = parse_config(text=serialize_config(cfg))
        assert again == cfg

    def test_modified_round_trip(self):
        cfg = parse_config(
            desk=True,
            overrides=[
                "design.range_override_deg=20",
                "design.tau_max_ns=16",
                "sweep.values=0,2.5,5",
                "link.channel_gains=1.0,0.5,2.0",
                "mobility.var_theta_deg2=0",
            ],
        )
        again = parse_config(text=serialize_config(cfg))
        assert again == cfg

    def test_hash_is_stable_and_sensitive(self):
        a = parse_config()
        b = parse_config()
        assert config_hash(a) == config_hash(b)
        assert len(config_hash(a)) == 12
        c = parse_config(overrides=["array.num_antennas=64"])
        assert config_hash(c) != config_hash(a)

    def test_desk_and_full_hash_differ(self):
        assert config_hash(parse_config(desk=True)) != config_hash(parse_config())


class TestSweepMaterializer:
    def test_angle_axis_converts_to_radians(self):
        cfg = parse_config(overrides=["sweep.values=0,10,20", "sweep.trials=5"])
        sw = cfg.sweep(master_seed=3)
        assert sw.axis == "offset_range"
        np.testing.assert_allclose(sw.values, (0.0, 10 * DEG, 20 * DEG))
        assert sw.trials == 5
        assert sw.master_seed == 3

    def test_count_axis_keeps_raw_values(self):
        cfg = parse_config(overrides=["sweep.axis=num_antennas", "sweep.values=8,16,32"])
        sw = cfg.sweep(master_seed=0)
        assert sw.values == (8.0, 16.0, 32.0)

    def test_cli_level_overrides_win(self):
        cfg = parse_config()
        sw = cfg.sweep(master_seed=1, axis="mean_velocity", values=(0.0, 40.0), beams=("stepped",))
        assert sw.axis == "mean_velocity"
        np.testing.assert_allclose(sw.values, (0.0, 40 * DEG))
        assert sw.beams == ("stepped",)
