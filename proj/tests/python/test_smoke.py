"""Smoke tests for the python bindings."""

import math
import os
import tempfile

import pytest

import lrwpan as lw


def test_crc16_known_values():
    assert lw.crc16(b"") == 0x0000
    assert lw.crc16(b"\x00\x00") == 0x0000
    assert lw.crc16(b"123456789") == 0x2189


def test_frame_round_trip():
    payload = bytes(range(100))
    built = lw.build_frame(payload, 1)
    assert len(built.octets) == 108
    assert built.pad == 0

    bits = []
    for octet in built.octets:
        bits.extend((octet >> b) & 1 for b in range(8))
    frame = lw.parse_frame(bits)
    assert frame.payload == payload

    bits[6 * 8 + 3] ^= 1
    with pytest.raises(ValueError, match="CrcMismatch"):
        lw.parse_frame(bits)


def test_chip_table():
    assert lw.spread_bit(0).chips() == [1, 1, 1, 1, 0, 1, 0, 1, 1, 0, 0, 1, 0, 0, 0]
    assert lw.spread_bit(1).chips() == [0, 0, 0, 0, 1, 0, 1, 0, 0, 1, 1, 0, 1, 1, 1]
    bit, dist = lw.despread(lw.spread_bit(1))
    assert (bit, dist) == (1, 0)


def test_diff_coding_round_trip():
    bits = [1, 0, 1, 1, 0, 0, 1]
    assert lw.diff_decode(lw.diff_encode(bits)) == bits


def test_rateplan_golden_values():
    plan = lw.plan(lw.Band.B868, 16)
    assert (plan.interpolation, plan.decimation) == (400, 200)
    plan = lw.plan(lw.Band.B915, 8)
    assert (plan.interpolation, plan.decimation) == (400, 200)
    assert lw.byte_modulus(35, 1).num == 16
    with pytest.raises(Exception, match="IllegalInterpolation"):
        lw.plan(lw.Band.B868, 13)


def test_rrc_taps_energy():
    taps = lw.rrc_taps(lw.RrcSpec(0.35, 11, 8))
    assert len(taps) == 89
    assert math.isclose(sum(t * t for t in taps), 1.0, rel_tol=1e-6)


def test_packet_sink_decodes_frame():
    payload = b"hello, wpan"
    built = lw.build_frame(payload, 1)
    bits = []
    for octet in built.octets:
        bits.extend((octet >> b) & 1 for b in range(8))
    chips = lw.spread_bits(lw.diff_encode(bits))
    sink = lw.PacketSink()
    events = sink.run(chips)
    assert len(events) == 1
    assert events[0].crc_ok
    assert events[0].psdu[: len(payload)] == payload


def test_noise_free_loopback_ber():
    cfg = lw.ExperimentConfig()
    cfg.band = lw.Band.B868
    cfg.snr_points = [float("inf")]
    cfg.bits_per_point = 3000
    cfg.seed = 9
    rows = lw.run_ber_experiment(cfg)
    assert rows[0].ber == 0.0
    assert rows[0].bits_compared >= 2000


def test_full_receiver_frame_loopback():
    txc = lw.TxConfig()
    txc.chip_rate = 300000.0
    txc.rrc = lw.RrcSpec(0.35, 11, 8)
    payloads = [lw.make_payload(seq, 40, 123) for seq in range(2)]
    tx = lw.tx_frames(payloads, 1, txc)

    ch = lw.ChannelConfig()
    ch.phase_rad = 1.0
    ch.cfo_hz = 600.0
    ch.delay_samples = 1.25
    rx = lw.apply_channel(tx.iq, ch)

    sc = lw.SyncConfig()
    sc.timing_omega = 8.0
    out = lw.FullReceiver(sc, txc.rrc).process(rx)
    got = [ev.psdu[:-2] for ev in out.events if ev.crc_ok]
    assert got == payloads
    assert lw.per(payloads, out.events) == 0.0
    assert len(out.soft.samples) > 0


def test_channel_determinism():
    buf = lw.IqBuffer([complex(1.0, 0.0)] * 2000, 1.0)
    cfg = lw.ChannelConfig()
    cfg.snr_db = 5.0
    cfg.seed = 42
    a = lw.apply_channel(buf, cfg)
    b = lw.apply_channel(buf, cfg)
    assert a.samples == b.samples


def test_iq_file_round_trip():
    buf = lw.IqBuffer([complex(0.5, -0.25), complex(-1.0, 2.0)], 2.4e6)
    with tempfile.TemporaryDirectory() as d:
        path = os.path.join(d, "x.iq")
        lw.iq_write(buf, path)
        assert os.path.getsize(path) == 16
        back = lw.iq_read(path, 2.4e6)
        assert back.samples == buf.samples
        assert back.sample_rate == 2.4e6


def test_psd_tone_peak():
    n = 8192
    fs = 1000.0
    tone = [complex(math.cos(2 * math.pi * 125.0 * i / fs),
                    math.sin(2 * math.pi * 125.0 * i / fs)) for i in range(n)]
    res = lw.welch_psd(lw.IqBuffer(tone, fs), 512)
    peak = max(range(len(res.power_db)), key=lambda i: res.power_db[i])
    assert abs(res.freq_hz[peak] - 125.0) <= res.bin_width_hz


def test_mfb_curve():
    assert math.isclose(lw.dbpsk_mfb(0.0), 0.5 * math.exp(-1.0), rel_tol=1e-12)
    assert lw.dbpsk_mfb(6.0) < lw.dbpsk_mfb(5.0)
