// Python bindings for the mcsa core library.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "mcsa/ann.hpp"
#include "mcsa/daq.hpp"
#include "mcsa/error.hpp"
#include "mcsa/features.hpp"
#include "mcsa/fft.hpp"
#include "mcsa/fixtures.hpp"
#include "mcsa/motor.hpp"
#include "mcsa/sidebands.hpp"
#include "mcsa/spectrum.hpp"

namespace py = pybind11;
using namespace mcsa;

namespace {

template <typename T, typename Writer>
std::string to_text(const T& value, Writer write) {
  std::ostringstream out;
  write(out, value);
  return out.str();
}

}  // namespace

PYBIND11_MODULE(_mcsa, m) {
  m.doc() = "Motor current signature analysis toolkit";
  m.attr("__version__") = "0.1.0";

  // Errors ------------------------------------------------------------------------
  auto error = py::register_exception<Error>(m, "McsaError", PyExc_RuntimeError);
  auto domain = py::register_exception<DomainError>(m, "DomainError", error.ptr());
  auto config = py::register_exception<ConfigError>(m, "ConfigError", error.ptr());
  py::register_exception<ScheduleError>(m, "ScheduleError", config.ptr());
  py::register_exception<NotFoundError>(m, "NotFoundError", error.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", error.ptr());
  py::register_exception<ParseError>(m, "ParseError", error.ptr());
  py::register_exception<CoverageError>(m, "CoverageError", error.ptr());
  py::register_exception<ProtocolError>(m, "ProtocolError", error.ptr());
  auto training = py::register_exception<TrainingError>(m, "TrainingError", error.ptr());
  py::register_exception<DivergenceError>(m, "DivergenceError", training.ptr());
  (void)domain;

  // Enums -------------------------------------------------------------------------
  py::enum_<FaultLabel>(m, "FaultLabel")
      .value("healthy", FaultLabel::healthy)
      .value("inter_turn_minor", FaultLabel::inter_turn_minor)
      .value("inter_turn_severe", FaultLabel::inter_turn_severe)
      .value("broken_bar", FaultLabel::broken_bar);
  py::enum_<FixtureCase>(m, "FixtureCase")
      .value("ten_turns", FixtureCase::ten_turns)
      .value("thirty_turns", FixtureCase::thirty_turns);
  py::enum_<Branch>(m, "Branch").value("positive", Branch::positive).value("negative", Branch::negative);
  py::enum_<NSchedule>(m, "NSchedule")
      .value("fixed_one", NSchedule::fixed_one)
      .value("half_k_plus_one", NSchedule::half_k_plus_one);
  py::enum_<Window>(m, "Window").value("rectangular", Window::rectangular).value("hann", Window::hann);
  py::enum_<Normalize>(m, "Normalize").value("none", Normalize::none).value("by_fundamental", Normalize::by_fundamental);
  py::enum_<Estimator>(m, "Estimator").value("peak", Estimator::peak).value("fit", Estimator::fit);
  py::enum_<Activation>(m, "Activation").value("sigmoid", Activation::sigmoid).value("tanh", Activation::tanh);
  py::enum_<Channel>(m, "Channel").value("current", Channel::current).value("speed", Channel::speed);

  // Motor model --------------------------------------------------------------------
  py::class_<MotorParams>(m, "MotorParams")
      .def(py::init<int, double, double, double, double>(), py::arg("pole_pairs"), py::arg("supply_freq_hz"),
           py::arg("sync_speed_rpm"), py::arg("rated_kw"), py::arg("rated_current_a"))
      .def_static("lab_motor", &MotorParams::lab_motor)
      .def_property_readonly("pole_pairs", &MotorParams::pole_pairs)
      .def_property_readonly("supply_freq_hz", &MotorParams::supply_freq_hz)
      .def_property_readonly("sync_speed_rpm", &MotorParams::sync_speed_rpm);

  py::class_<SlipState>(m, "SlipState")
      .def_readonly("rotor_speed_rpm", &SlipState::rotor_speed_rpm)
      .def_readonly("slip", &SlipState::slip)
      .def_readonly("slip_freq_hz", &SlipState::slip_freq_hz);
  m.def("compute_slip", &compute_slip, py::arg("params"), py::arg("rotor_speed_rpm"));
  m.def("slip_override", &slip_override, py::arg("params"), py::arg("slip"));

  py::class_<FaultComponent>(m, "FaultComponent")
      .def(py::init([](double f, double a, double ph) { return FaultComponent{f, a, ph}; }), py::arg("freq_hz"),
           py::arg("amplitude"), py::arg("phase_rad") = 0.0)
      .def_readonly("freq_hz", &FaultComponent::freq_hz)
      .def_readonly("amplitude", &FaultComponent::amplitude)
      .def_readonly("phase_rad", &FaultComponent::phase_rad);
  py::class_<FaultSignature>(m, "FaultSignature")
      .def(py::init<FaultLabel, std::vector<FaultComponent>>(), py::arg("label"), py::arg("components"))
      .def_static("healthy", &FaultSignature::healthy)
      .def_property_readonly("label", &FaultSignature::label)
      .def_property_readonly("components", &FaultSignature::components);
  m.def("fault_from_tables", &fault_from_tables, py::arg("case_id"), py::arg("fixtures"));

  py::class_<Waveform>(m, "Waveform")
      .def(py::init<double, std::vector<double>>(), py::arg("sample_rate_hz"), py::arg("samples"))
      .def_property_readonly("sample_rate_hz", &Waveform::sample_rate_hz)
      .def_property_readonly("samples", &Waveform::samples)
      .def_property_readonly("duration_s", &Waveform::duration_s)
      .def("__len__", &Waveform::size)
      .def("to_csv", [](const Waveform& w) { return to_text(w, write_waveform); })
      .def_static("from_csv", [](const std::string& s) {
        std::istringstream in(s);
        return read_waveform(in);
      });
  m.def(
      "synthesize",
      [](const MotorParams& p, const FaultSignature& f, double fs, std::size_t n, double amp, double sigma,
         std::uint64_t seed) {
        return synthesize(p, f, SynthesisConfig{amp, fs, n, sigma, seed});
      },
      py::arg("params"), py::arg("fault"), py::arg("sample_rate_hz") = 3250.0, py::arg("n_samples") = 390,
      py::arg("fundamental_amp") = 1.0, py::arg("noise_sigma") = 0.0, py::arg("seed") = 0);

  // Fixtures -------------------------------------------------------------------------
  py::class_<FixtureMeta>(m, "FixtureMeta")
      .def_readonly("supply_freq_hz", &FixtureMeta::supply_freq_hz)
      .def_readonly("rotor_speed_rpm", &FixtureMeta::rotor_speed_rpm)
      .def_readonly("slip", &FixtureMeta::slip)
      .def_readonly("rated_kw", &FixtureMeta::rated_kw)
      .def_readonly("pole_pairs", &FixtureMeta::pole_pairs);
  py::class_<FixtureRow>(m, "FixtureRow")
      .def_readonly("k", &FixtureRow::k)
      .def_readonly("pos_freq_hz", &FixtureRow::pos_freq_hz)
      .def_readonly("pos_amplitude", &FixtureRow::pos_amplitude)
      .def_readonly("neg_freq_hz", &FixtureRow::neg_freq_hz)
      .def_readonly("neg_amplitude", &FixtureRow::neg_amplitude);
  py::class_<FixtureTable>(m, "FixtureTable")
      .def_readonly("case_id", &FixtureTable::case_id)
      .def_readonly("meta", &FixtureTable::meta)
      .def_readonly("note", &FixtureTable::note)
      .def_readonly("rows", &FixtureTable::rows);
  m.def("builtin_fixtures", &builtin_fixtures);
  m.def("load_fixtures_file", &load_fixtures_file, py::arg("path"));
  m.def("serialize_fixtures", &serialize_fixtures, py::arg("tables"));
  m.def("builtin_fixture_text", [] { return std::string(builtin_fixture_text()); });
  m.def("find_fixture", &find_fixture, py::arg("tables"), py::arg("case_id"), py::return_value_policy::copy);

  // Sidebands --------------------------------------------------------------------------
  py::class_<SidebandEntry>(m, "SidebandEntry")
      .def_readonly("k", &SidebandEntry::k)
      .def_readonly("n", &SidebandEntry::n)
      .def_readonly("branch", &SidebandEntry::branch)
      .def_readonly("freq_hz", &SidebandEntry::freq_hz)
      .def_readonly("reflected", &SidebandEntry::reflected)
      .def_readonly("amplitude", &SidebandEntry::amplitude);
  py::class_<SidebandGrid>(m, "SidebandGrid")
      .def_readonly("case_label", &SidebandGrid::case_label)
      .def_readonly("slip", &SidebandGrid::slip)
      .def_readonly("pole_pairs", &SidebandGrid::pole_pairs)
      .def_readonly("supply_freq_hz", &SidebandGrid::supply_freq_hz)
      .def_readonly("entries", &SidebandGrid::entries);
  m.def("odd_orders", &odd_orders, py::arg("k_max") = 21);
  m.def(
      "flux_harmonics",
      [](double s, int p, double f, const std::vector<int>& k, NSchedule sched) {
        return flux_harmonics(s, p, f, k, sched);
      },
      py::arg("slip"), py::arg("pole_pairs"), py::arg("supply_freq_hz"), py::arg("k_values"),
      py::arg("schedule") = NSchedule::fixed_one);
  m.def(
      "broken_bar_sidebands",
      [](double s, double f, const std::vector<int>& orders) { return broken_bar_sidebands(s, f, orders); },
      py::arg("slip"), py::arg("supply_freq_hz"), py::arg("orders") = std::vector<int>{1});
  py::class_<MatchRow>(m, "MatchRow")
      .def_readonly("k", &MatchRow::k)
      .def_readonly("branch", &MatchRow::branch)
      .def_readonly("n", &MatchRow::n)
      .def_readonly("predicted_hz", &MatchRow::predicted_hz)
      .def_readonly("fixture_hz", &MatchRow::fixture_hz)
      .def_readonly("abs_delta_hz", &MatchRow::abs_delta_hz)
      .def_readonly("passed", &MatchRow::pass);
  py::class_<MatchReport>(m, "MatchReport")
      .def_readonly("tol_hz", &MatchReport::tol_hz)
      .def_readonly("rows", &MatchReport::rows)
      .def_property_readonly("pass_count", &MatchReport::pass_count)
      .def_property_readonly("all_pass", &MatchReport::all_pass)
      .def("to_csv", [](const MatchReport& r) { return to_text(r, write_match_report); });
  m.def("match_table", &match_table, py::arg("grid"), py::arg("fixture"), py::arg("tol_hz"));

  // Spectrum ----------------------------------------------------------------------------
  m.def(
      "fft", [](const std::vector<std::complex<double>>& x) { return fft(x); }, py::arg("x"));
  py::class_<Spectrum>(m, "Spectrum")
      .def_readonly("sample_rate_hz", &Spectrum::sample_rate_hz)
      .def_readonly("bin_hz", &Spectrum::bin_hz)
      .def_readonly("n_fft", &Spectrum::n_fft)
      .def_readonly("n_samples", &Spectrum::n_samples)
      .def_readonly("window", &Spectrum::window)
      .def_readonly("amplitudes", &Spectrum::amplitudes)
      .def("to_csv", [](const Spectrum& s) { return to_text(s, write_spectrum); });
  m.def("transform", &transform, py::arg("waveform"), py::arg("window") = Window::hann,
        py::arg("n_fft") = std::nullopt);
  py::class_<SamplingPlan>(m, "SamplingPlan")
      .def_readonly("n_samples", &SamplingPlan::n_samples)
      .def_readonly("sample_rate_hz", &SamplingPlan::sample_rate_hz)
      .def_readonly("sample_time_s", &SamplingPlan::sample_time_s);
  m.def("sampling_plan", &sampling_plan, py::arg("cycles"), py::arg("samples_per_cycle"),
        py::arg("cycle_period_s"));
  py::class_<PeakMeasurement>(m, "PeakMeasurement")
      .def_readonly("target_hz", &PeakMeasurement::target_hz)
      .def_readonly("found_hz", &PeakMeasurement::found_hz)
      .def_readonly("amplitude", &PeakMeasurement::amplitude)
      .def_readonly("bin_offset", &PeakMeasurement::bin_offset);
  m.def("measure_peak", &measure_peak, py::arg("spectrum"), py::arg("target_hz"), py::arg("half_width_bins") = 2);
  m.def(
      "fit_amplitudes",
      [](const Spectrum& s, const std::vector<double>& t, int hw) { return fit_amplitudes(s, t, hw); },
      py::arg("spectrum"), py::arg("target_hz"), py::arg("half_width_bins") = 2);

  // Features ------------------------------------------------------------------------------
  py::class_<FeatureVector>(m, "FeatureVector")
      .def(py::init([](std::vector<double> values, std::optional<FaultLabel> label) {
             FeatureVector fv;
             fv.values = std::move(values);
             fv.label = label;
             return fv;
           }),
           py::arg("values"), py::arg("label") = std::nullopt)
      .def_readonly("values", &FeatureVector::values)
      .def_readonly("label", &FeatureVector::label)
      .def_property_readonly("layout", [](const FeatureVector& fv) { return layout_string(fv.layout); });
  m.def(
      "extract_features",
      [](const Spectrum& s, const SidebandGrid& g, Normalize n, Estimator e, int hw) {
        return extract_features(s, g, ExtractOptions{n, e, hw});
      },
      py::arg("spectrum"), py::arg("grid"), py::arg("normalize") = Normalize::by_fundamental,
      py::arg("estimator") = Estimator::fit, py::arg("half_width_bins") = 2);
  m.def("grid_from_fixture", &grid_from_fixture, py::arg("table"));
  m.def(
      "build_default_dataset",
      [](int per_case, double sigma, std::uint64_t seed) {
        return build_dataset(default_cases(builtin_fixtures()), per_case, sigma, seed);
      },
      py::arg("per_case") = 100, py::arg("noise_sigma") = 0.02, py::arg("seed") = 7);
  m.def("split_holdout", &split_holdout, py::arg("data"), py::arg("fraction"), py::arg("seed"));
  m.def("dataset_to_csv", [](const std::vector<FeatureVector>& d) { return to_text(d, write_dataset); });

  // Classifier ------------------------------------------------------------------------------
  py::class_<MlpModel>(m, "MlpModel")
      .def_property_readonly("input_size", &MlpModel::input_size)
      .def_property_readonly("hidden_size", &MlpModel::hidden_size)
      .def_property_readonly("output_size", &MlpModel::output_size)
      .def_readonly("classes", &MlpModel::classes)
      .def("save", [](const MlpModel& mdl) { return to_text(mdl, save_model); })
      .def_static("load", [](const std::string& s) {
        std::istringstream in(s);
        return load_model(in);
      });
  m.def(
      "init_model",
      [](const std::vector<std::size_t>& sizes, Activation act, std::uint64_t seed) {
        return init_model(sizes, act, seed);
      },
      py::arg("layer_sizes"), py::arg("activation") = Activation::sigmoid, py::arg("seed") = 7);
  m.def(
      "forward", [](const MlpModel& mdl, const std::vector<double>& x) { return forward(mdl, x); }, py::arg("model"),
      py::arg("x"));
  m.def(
      "gradient_check",
      [](const MlpModel& mdl, const std::vector<double>& x, std::size_t y, double eps) {
        return gradient_check(mdl, x, y, eps);
      },
      py::arg("model"), py::arg("x"), py::arg("y"), py::arg("epsilon") = 1e-5);
  py::class_<TrainResult>(m, "TrainResult")
      .def_readonly("model", &TrainResult::model)
      .def_readonly("loss_history", &TrainResult::loss_history);
  m.def(
      "train",
      [](const MlpModel& init, const std::vector<FeatureVector>& data, double lr, int epochs, std::size_t batch,
         std::uint64_t seed, double l2) { return train(init, data, TrainConfig{lr, epochs, batch, seed, l2}); },
      py::arg("model"), py::arg("data"), py::arg("learning_rate") = 0.5, py::arg("epochs") = 500,
      py::arg("batch_size") = 16, py::arg("seed") = 7, py::arg("l2") = 0.0);
  py::class_<Classification>(m, "Classification")
      .def_readonly("label", &Classification::label)
      .def_readonly("confidence", &Classification::confidence)
      .def_readonly("uncertain", &Classification::uncertain);
  m.def(
      "classify",
      [](const MlpModel& mdl, const std::vector<double>& x, double thr) { return classify(mdl, x, thr); },
      py::arg("model"), py::arg("x"), py::arg("reject_threshold") = 0.6);
  m.def("accuracy", &accuracy, py::arg("model"), py::arg("data"));

  // DAQ ---------------------------------------------------------------------------------------
  py::class_<AdcConfig>(m, "AdcConfig")
      .def(py::init([](double lo, double hi) { return AdcConfig{8, lo, hi}; }), py::arg("v_min") = 0.0,
           py::arg("v_max") = 5.0)
      .def_readonly("v_min", &AdcConfig::v_min)
      .def_readonly("v_max", &AdcConfig::v_max)
      .def_property_readonly("lsb_volts", &AdcConfig::lsb_volts);
  py::class_<NibbleRead>(m, "NibbleRead")
      .def(py::init([](bool hi, std::uint8_t s4s6, std::uint8_t s7) { return NibbleRead{hi, s4s6, s7}; }),
           py::arg("select_high"), py::arg("s4_s6"), py::arg("s7"))
      .def_readonly("select_high", &NibbleRead::select_high)
      .def_readonly("s4_s6", &NibbleRead::s4_s6)
      .def_readonly("s7", &NibbleRead::s7)
      .def("__eq__", [](const NibbleRead& a, const NibbleRead& b) { return a == b; });
  m.def(
      "quantize", [](const AdcConfig& c, double v) { return quantize(c, v); }, py::arg("cfg"), py::arg("volts"));
  m.def("dequantize", &dequantize, py::arg("cfg"), py::arg("code"));
  m.def("encode_nibbles", &encode_nibbles, py::arg("code"));
  m.def("decode_nibbles", &decode_nibbles, py::arg("low"), py::arg("high"));
  py::class_<DaqCapture>(m, "DaqCapture")
      .def_readonly("channel_select", &DaqCapture::channel_select)
      .def_readonly("sample_rate_hz", &DaqCapture::sample_rate_hz)
      .def_readonly("codes", &DaqCapture::codes)
      .def_readonly("saturations", &DaqCapture::saturations)
      .def("decode_trace", &DaqCapture::decode_trace)
      .def("to_text", [](const DaqCapture& c) { return to_text(c, write_capture); })
      .def_static("from_text", [](const std::string& s) {
        std::istringstream in(s);
        return read_capture(in);
      });
  m.def(
      "capture",
      [](const Waveform& w, Channel ch, const AdcConfig& cfg) {
        const auto chain = ch == Channel::current ? ConditioningChain::current_chain() : ConditioningChain::speed_chain();
        return capture(w, chain, cfg, channel_code(ch));
      },
      py::arg("waveform"), py::arg("channel") = Channel::current, py::arg("cfg") = AdcConfig{});
  m.def("decoded_volts", &decoded_volts, py::arg("capture"), py::arg("cfg") = AdcConfig{});
}
