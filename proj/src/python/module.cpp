#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lrwpan/channel.hpp"
#include "lrwpan/experiments.hpp"
#include "lrwpan/framing.hpp"
#include "lrwpan/iqfile.hpp"
#include "lrwpan/metrics.hpp"
#include "lrwpan/modem.hpp"
#include "lrwpan/psd.hpp"
#include "lrwpan/rateplan.hpp"
#include "lrwpan/spreading.hpp"
#include "lrwpan/sync.hpp"
#include "lrwpan/waveform.hpp"

namespace py = pybind11;
using namespace lrwpan;

namespace {

std::vector<std::uint8_t> to_bytes(const py::bytes& b) {
    const std::string s = b;
    return std::vector<std::uint8_t>(s.begin(), s.end());
}

py::bytes from_bytes(const std::vector<std::uint8_t>& v) {
    return py::bytes(reinterpret_cast<const char*>(v.data()), v.size());
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "IEEE 802.15.4 868/915 MHz software PHY: framing, spreading, "
              "waveform, synchronization, channel simulation and measurement";

    // ---- types ----
    py::class_<IqBuffer>(m, "IqBuffer")
        .def(py::init<>())
        .def(py::init<std::vector<cplx>, double>(), py::arg("samples"), py::arg("sample_rate"))
        .def_readwrite("samples", &IqBuffer::samples)
        .def_readwrite("sample_rate", &IqBuffer::sample_rate)
        .def("__len__", &IqBuffer::size);

    // ---- framing ----
    m.def("crc16", [](const py::bytes& data) { return framing::crc16(to_bytes(data)); });

    py::class_<framing::BuiltFrame>(m, "BuiltFrame")
        .def_property_readonly("octets",
                               [](const framing::BuiltFrame& f) { return from_bytes(f.octets); })
        .def_readonly("pad", &framing::BuiltFrame::pad);

    m.def(
        "build_frame",
        [](const py::bytes& payload, std::size_t byte_modulus) {
            return framing::build_frame(to_bytes(payload), byte_modulus);
        },
        py::arg("payload"), py::arg("byte_modulus") = 1);

    py::class_<framing::PhyFrame>(m, "PhyFrame")
        .def_readonly("sfd", &framing::PhyFrame::sfd)
        .def_property_readonly("psdu",
                               [](const framing::PhyFrame& f) { return from_bytes(f.psdu); })
        .def_property_readonly("payload",
                               [](const framing::PhyFrame& f) {
                                   const auto p = f.payload();
                                   return py::bytes(reinterpret_cast<const char*>(p.data()),
                                                    p.size());
                               })
        .def_readonly("pad", &framing::PhyFrame::pad);

    m.def("parse_frame", [](const std::vector<std::uint8_t>& bits) {
        framing::FrameError err;
        auto frame = framing::parse_frame(bits, err);
        if (!frame)
            throw py::value_error(framing::to_string(err));
        return *frame;
    });

    py::class_<framing::FrameEvent>(m, "FrameEvent")
        .def_property_readonly("psdu",
                               [](const framing::FrameEvent& e) { return from_bytes(e.psdu); })
        .def_readonly("crc_ok", &framing::FrameEvent::crc_ok);

    py::class_<framing::SinkConfig>(m, "SinkConfig")
        .def(py::init<>())
        .def_readwrite("chip_error_budget", &framing::SinkConfig::chip_error_budget)
        .def_readwrite("preamble_zero_bits", &framing::SinkConfig::preamble_zero_bits);

    py::class_<framing::PacketSink>(m, "PacketSink")
        .def(py::init<>())
        .def(py::init<framing::SinkConfig>())
        .def("run", [](framing::PacketSink& s,
                       const std::vector<std::uint8_t>& chips) { return s.run(chips); })
        .def("reset", &framing::PacketSink::reset)
        .def_property_readonly("chip_errors", &framing::PacketSink::chip_errors);

    // ---- spreading ----
    py::class_<spreading::ChipWord>(m, "ChipWord")
        .def(py::init<>())
        .def(py::init([](std::uint16_t packed) { return spreading::ChipWord{packed}; }))
        .def_readonly("packed", &spreading::ChipWord::packed)
        .def("chips", [](const spreading::ChipWord& w) {
            const auto c = w.chips();
            return std::vector<std::uint8_t>(c.begin(), c.end());
        });

    m.def("spread_bit", &spreading::spread_bit);
    m.def("spread_bits", [](const std::vector<std::uint8_t>& bits) {
        return spreading::spread_bits(bits);
    });
    m.def("despread", [](const spreading::ChipWord& w) {
        const auto r = spreading::despread(w);
        return py::make_tuple(r.bit, r.distance);
    });
    m.def("despread_chips", [](const std::vector<std::uint8_t>& chips) {
        return spreading::despread_chips(chips);
    });
    m.def(
        "diff_encode",
        [](const std::vector<std::uint8_t>& bits, std::uint8_t initial) {
            spreading::DiffState st{initial};
            return spreading::diff_encode(bits, st);
        },
        py::arg("bits"), py::arg("initial") = 0);
    m.def(
        "diff_decode",
        [](const std::vector<std::uint8_t>& bits, std::uint8_t initial) {
            spreading::DiffState st{initial};
            return spreading::diff_decode(bits, st);
        },
        py::arg("bits"), py::arg("initial") = 0);

    // ---- waveform ----
    py::class_<waveform::RrcSpec>(m, "RrcSpec")
        .def(py::init<>())
        .def(py::init<double, int, int>(), py::arg("rolloff"), py::arg("span"), py::arg("sps"))
        .def_readwrite("rolloff", &waveform::RrcSpec::rolloff)
        .def_readwrite("span", &waveform::RrcSpec::span)
        .def_readwrite("sps", &waveform::RrcSpec::sps);

    m.def("rrc_taps", &waveform::rrc_taps);
    m.def("chips_to_symbols", [](const std::vector<std::uint8_t>& chips, double chip_rate) {
        return waveform::chips_to_symbols(chips, chip_rate);
    }, py::arg("chips"), py::arg("chip_rate") = 1.0);
    m.def("symbols_to_chips", &waveform::symbols_to_chips);
    m.def("pulse_shape", &waveform::pulse_shape);
    m.def("matched_filter", &waveform::matched_filter);
    m.def("mix", &waveform::mix, py::arg("samples"), py::arg("frequency_hz"),
          py::arg("phase_rad") = 0.0);

    // ---- sync ----
    py::class_<sync::SyncConfig>(m, "SyncConfig")
        .def(py::init<>())
        .def_readwrite("squelch_threshold_db", &sync::SyncConfig::squelch_threshold_db)
        .def_readwrite("agc_reference", &sync::SyncConfig::agc_reference)
        .def_readwrite("agc_rate", &sync::SyncConfig::agc_rate)
        .def_readwrite("costas_bandwidth", &sync::SyncConfig::costas_bandwidth)
        .def_readwrite("timing_omega", &sync::SyncConfig::timing_omega)
        .def_readwrite("timing_gain_mu", &sync::SyncConfig::timing_gain_mu)
        .def_readwrite("timing_gain_omega", &sync::SyncConfig::timing_gain_omega);

    py::class_<sync::PowerSquelch>(m, "PowerSquelch")
        .def(py::init<double>(), py::arg("threshold_db"))
        .def("process", &sync::PowerSquelch::process);
    py::class_<sync::Agc>(m, "Agc")
        .def(py::init<double, double>(), py::arg("reference"), py::arg("rate"))
        .def("process", &sync::Agc::process)
        .def_property_readonly("gain", &sync::Agc::gain);
    py::class_<sync::CostasLoop>(m, "CostasLoop")
        .def(py::init<double>(), py::arg("loop_bandwidth"))
        .def("process", &sync::CostasLoop::process)
        .def_property_readonly("phase", &sync::CostasLoop::phase)
        .def_property_readonly("frequency", &sync::CostasLoop::frequency);
    py::class_<sync::ClockRecoveryMM>(m, "ClockRecoveryMM")
        .def(py::init<double, double, double>(), py::arg("omega"), py::arg("gain_omega"),
             py::arg("gain_mu"))
        .def("process", &sync::ClockRecoveryMM::process)
        .def_property_readonly("omega", &sync::ClockRecoveryMM::omega);

    // ---- channel ----
    py::class_<channel::ChannelConfig>(m, "ChannelConfig")
        .def(py::init<>())
        .def_readwrite("snr_db", &channel::ChannelConfig::snr_db)
        .def_readwrite("amplitude", &channel::ChannelConfig::amplitude)
        .def_readwrite("cfo_hz", &channel::ChannelConfig::cfo_hz)
        .def_readwrite("phase_rad", &channel::ChannelConfig::phase_rad)
        .def_readwrite("delay_samples", &channel::ChannelConfig::delay_samples)
        .def_readwrite("seed", &channel::ChannelConfig::seed);

    m.def("awgn", &channel::awgn);
    m.def("fractional_delay", &channel::fractional_delay);
    m.def("apply_channel", &channel::apply_channel);

    // ---- rateplan ----
    py::enum_<rateplan::Band>(m, "Band")
        .value("B868", rateplan::Band::B868)
        .value("B915", rateplan::Band::B915);

    py::class_<rateplan::RateConfig>(m, "RateConfig")
        .def_readonly("band", &rateplan::RateConfig::band)
        .def_readonly("bit_rate", &rateplan::RateConfig::bit_rate)
        .def_readonly("chip_rate", &rateplan::RateConfig::chip_rate)
        .def_readonly("sps_symbol", &rateplan::RateConfig::sps_symbol)
        .def_readonly("sps_chip", &rateplan::RateConfig::sps_chip)
        .def_readonly("interpolation", &rateplan::RateConfig::interpolation)
        .def_readonly("decimation", &rateplan::RateConfig::decimation)
        .def_readonly("dac_rate", &rateplan::RateConfig::dac_rate)
        .def_readonly("adc_rate", &rateplan::RateConfig::adc_rate);

    py::class_<rateplan::ByteModulus>(m, "ByteModulus")
        .def_readonly("num", &rateplan::ByteModulus::num)
        .def_readonly("den", &rateplan::ByteModulus::den)
        .def_readonly("integral", &rateplan::ByteModulus::integral)
        .def("value", &rateplan::ByteModulus::value);

    m.def("plan", &rateplan::plan);
    m.def("byte_modulus", &rateplan::byte_modulus);
    m.def("validate_factors", &rateplan::validate_factors);

    // ---- metrics / psd / iq files ----
    m.def("ber", [](const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b) {
        return metrics::ber(a, b);
    });
    m.def("dbpsk_mfb", &metrics::dbpsk_mfb);
    m.def("estimate_snr_db", &metrics::estimate_snr_db);

    py::class_<psd::PsdResult>(m, "PsdResult")
        .def_readonly("freq_hz", &psd::PsdResult::freq_hz)
        .def_readonly("power_db", &psd::PsdResult::power_db)
        .def_readonly("bin_width_hz", &psd::PsdResult::bin_width_hz);
    m.def("welch_psd", &psd::welch);

    m.def("iq_write", &iqfile::iq_write);
    m.def("iq_read", &iqfile::iq_read);

    // ---- modem / experiments ----
    py::class_<modem::TxConfig>(m, "TxConfig")
        .def(py::init<>())
        .def_readwrite("chip_rate", &modem::TxConfig::chip_rate)
        .def_readwrite("rrc", &modem::TxConfig::rrc)
        .def_readwrite("warmup_chips", &modem::TxConfig::warmup_chips)
        .def_readwrite("idle_gap_samples", &modem::TxConfig::idle_gap_samples)
        .def_readwrite("if_hz", &modem::TxConfig::if_hz);

    py::class_<modem::TxStream>(m, "TxStream")
        .def_readonly("iq", &modem::TxStream::iq)
        .def_readonly("sps", &modem::TxStream::sps)
        .def_readonly("data_chip0", &modem::TxStream::data_chip0)
        .def_readonly("n_chips", &modem::TxStream::n_chips);

    m.def("tx_bits", [](const std::vector<std::uint8_t>& bits, const modem::TxConfig& cfg) {
        return modem::tx_bits(bits, cfg);
    });
    m.def("tx_chips", [](const std::vector<std::uint8_t>& chips, const modem::TxConfig& cfg) {
        return modem::tx_chips(chips, cfg);
    });
    m.def("tx_frames",
          [](const std::vector<py::bytes>& payloads, std::size_t byte_modulus,
             const modem::TxConfig& cfg) {
              std::vector<std::vector<std::uint8_t>> p;
              p.reserve(payloads.size());
              for (const auto& b : payloads)
                  p.push_back(to_bytes(b));
              return modem::tx_frames(p, byte_modulus, cfg);
          });
    m.def("genie_chip_samples", &modem::genie_chip_samples, py::arg("rx"), py::arg("cfg"),
          py::arg("channel"), py::arg("first_chip"), py::arg("n_chips"));

    py::class_<modem::RxOutput>(m, "RxOutput")
        .def_readonly("chips", &modem::RxOutput::chips)
        .def_readonly("events", &modem::RxOutput::events)
        .def_readonly("soft", &modem::RxOutput::soft)
        .def_readonly("costas_frequency", &modem::RxOutput::costas_frequency)
        .def_readonly("timing_omega", &modem::RxOutput::timing_omega);

    py::class_<modem::FullReceiver>(m, "FullReceiver")
        .def(py::init<const sync::SyncConfig&, const waveform::RrcSpec&>())
        .def(py::init<const sync::SyncConfig&, const waveform::RrcSpec&,
                      const framing::SinkConfig&>())
        .def("process", &modem::FullReceiver::process,
             py::call_guard<py::gil_scoped_release>());

    py::class_<metrics::MetricRow>(m, "MetricRow")
        .def_readonly("snr_db", &metrics::MetricRow::snr_db)
        .def_readonly("ebn0_db", &metrics::MetricRow::ebn0_db)
        .def_readonly("ber", &metrics::MetricRow::ber)
        .def_readonly("per", &metrics::MetricRow::per)
        .def_readonly("frames_sent", &metrics::MetricRow::frames_sent)
        .def_readonly("frames_ok", &metrics::MetricRow::frames_ok)
        .def_readonly("bits_compared", &metrics::MetricRow::bits_compared);

    py::class_<experiments::ExperimentConfig>(m, "ExperimentConfig")
        .def(py::init<>())
        .def_readwrite("band", &experiments::ExperimentConfig::band)
        .def_readwrite("sps", &experiments::ExperimentConfig::sps)
        .def_readwrite("snr_points", &experiments::ExperimentConfig::snr_points)
        .def_readwrite("payload_size", &experiments::ExperimentConfig::payload_size)
        .def_readwrite("frames_per_point", &experiments::ExperimentConfig::frames_per_point)
        .def_readwrite("bits_per_point", &experiments::ExperimentConfig::bits_per_point)
        .def_readwrite("genie_sync", &experiments::ExperimentConfig::genie_sync)
        .def_readwrite("chip_level", &experiments::ExperimentConfig::chip_level)
        .def_readwrite("seed", &experiments::ExperimentConfig::seed)
        .def_readwrite("amplitude", &experiments::ExperimentConfig::amplitude)
        .def_readwrite("cfo_hz", &experiments::ExperimentConfig::cfo_hz)
        .def_readwrite("random_phase", &experiments::ExperimentConfig::random_phase)
        .def_readwrite("phase_rad", &experiments::ExperimentConfig::phase_rad)
        .def_readwrite("delay_samples", &experiments::ExperimentConfig::delay_samples)
        .def_readwrite("idle_gap_samples", &experiments::ExperimentConfig::idle_gap_samples)
        .def_readwrite("warmup_chips", &experiments::ExperimentConfig::warmup_chips)
        .def_readwrite("rolloff", &experiments::ExperimentConfig::rolloff)
        .def_readwrite("rrc_span", &experiments::ExperimentConfig::rrc_span)
        .def_readwrite("parallel", &experiments::ExperimentConfig::parallel);

    m.def("run_ber_experiment", &experiments::run_ber_experiment,
          py::call_guard<py::gil_scoped_release>());
    m.def("run_per_experiment", &experiments::run_per_experiment,
          py::call_guard<py::gil_scoped_release>());
    m.def("ebn0_db_from_snr", &experiments::ebn0_db_from_snr);
    m.def("per", [](const std::vector<py::bytes>& sent,
                    const std::vector<framing::FrameEvent>& events) {
        std::vector<std::vector<std::uint8_t>> payloads;
        payloads.reserve(sent.size());
        for (const auto& b : sent)
            payloads.push_back(to_bytes(b));
        return experiments::per(payloads, events);
    });
    m.def("make_payload", [](std::uint16_t seq, std::size_t size, std::uint64_t seed) {
        return from_bytes(experiments::make_payload(seq, size, seed));
    });

    m.attr("__version__") = "0.1.0";
}
