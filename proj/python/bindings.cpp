#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "irscoex/config.hpp"
#include "irscoex/orderstats.hpp"

namespace py = pybind11;
using namespace irscoex;

PYBIND11_MODULE(_core, m) {
  m.doc() = "multi-operator reflector coexistence: order statistics, closed-form "
            "rates, phase optimization, and the Monte Carlo campaign engine";

  // order statistics
  m.def("mean_max_abs", &orderstats::mean_max_abs, py::arg("n"),
        "expected maximum of n i.i.d. Rayleigh magnitudes");
  m.def("mean_max_sq", &orderstats::mean_max_sq, py::arg("n"),
        "expected maximum of n i.i.d. squared magnitudes (harmonic number)");
  m.def("coherence_ratio", &orderstats::coherence_ratio, py::arg("l"),
        "mean_max_abs(l)^2 / mean_max_sq(l)");
  m.def(
      "event_pmf",
      [](int num_oob_irs, double align_prob, int k) {
        return orderstats::event_pmf({num_oob_irs, align_prob}, k);
      },
      py::arg("num_oob_irs"), py::arg("align_prob"), py::arg("m"),
      "probability that exactly m rival reflectors align");

  // channel geometry
  py::class_<Vec2>(m, "Vec2")
      .def(py::init<>())
      .def(py::init([](double x, double y) { return Vec2{x, y}; }), py::arg("x"), py::arg("y"))
      .def_readwrite("x", &Vec2::x)
      .def_readwrite("y", &Vec2::y);
  py::class_<Rect>(m, "Rect")
      .def(py::init<>())
      .def(py::init([](Vec2 lo, Vec2 hi) { return Rect{lo, hi}; }), py::arg("lo"), py::arg("hi"))
      .def_readwrite("lo", &Rect::lo)
      .def_readwrite("hi", &Rect::hi);
  py::class_<Geometry>(m, "Geometry")
      .def(py::init<>())
      .def_readwrite("bs", &Geometry::bs)
      .def_readwrite("irs", &Geometry::irs)
      .def_readwrite("ue_region", &Geometry::ue_region)
      .def_readwrite("c0_db", &Geometry::c0_db)
      .def_readwrite("d0", &Geometry::d0)
      .def_readwrite("alpha", &Geometry::alpha);
  m.def("path_loss", &path_loss, py::arg("geometry"), py::arg("from"), py::arg("to"));
  m.def("book_angle", &book_angle, py::arg("n"), py::arg("i"));
  m.def("cascade_angle", &cascade_angle, py::arg("phi"), py::arg("psi"));
  m.def("wrap_pm_pi", &wrap_pm_pi, py::arg("x"));

  // schemes and phase optimization
  py::enum_<EventLabel>(m, "EventLabel")
      .value("A", EventLabel::A)
      .value("B", EventLabel::B)
      .value("C", EventLabel::C)
      .value("D", EventLabel::D);
  py::enum_<SchemeKind>(m, "SchemeKind")
      .value("joint_opt", SchemeKind::joint_opt)
      .value("time_share", SchemeKind::time_share)
      .value("no_coop", SchemeKind::no_coop);
  py::class_<SchemePolicy>(m, "SchemePolicy")
      .def(py::init<>())
      .def_readwrite("kind", &SchemePolicy::kind)
      .def_readwrite("w_k", &SchemePolicy::w_k)
      .def_readwrite("w_q", &SchemePolicy::w_q)
      .def_readwrite("zeta", &SchemePolicy::zeta);
  py::class_<ChannelTerms>(m, "ChannelTerms")
      .def(py::init<>())
      .def_readwrite("snr", &ChannelTerms::snr)
      .def_readwrite("in_k", &ChannelTerms::in_k)
      .def_readwrite("oob_k", &ChannelTerms::oob_k)
      .def_readwrite("in_q", &ChannelTerms::in_q)
      .def_readwrite("oob_q", &ChannelTerms::oob_q)
      .def_readwrite("phi_a", &ChannelTerms::phi_a)
      .def_readwrite("phi_b", &ChannelTerms::phi_b);
  m.def("weighted_sum_se", &weighted_sum_se, py::arg("terms"), py::arg("w_k"), py::arg("w_q"),
        py::arg("phi"));
  m.def("newton_phase", &newton_phase, py::arg("terms"), py::arg("w_k"), py::arg("w_q"));
  m.def("grid_phase", &grid_phase, py::arg("terms"), py::arg("w_k"), py::arg("w_q"),
        py::arg("points"));

  // closed-form rates
  py::class_<rates::UeBudget>(m, "UeBudget")
      .def(py::init<>())
      .def_readwrite("n_in", &rates::UeBudget::n_in)
      .def_readwrite("n_oob", &rates::UeBudget::n_oob)
      .def_readwrite("l_in", &rates::UeBudget::l_in)
      .def_readwrite("l_oob", &rates::UeBudget::l_oob)
      .def_readwrite("beta_in", &rates::UeBudget::beta_in)
      .def_readwrite("beta_oob", &rates::UeBudget::beta_oob);
  py::class_<rates::SePair>(m, "SePair")
      .def_readonly("k", &rates::SePair::k)
      .def_readonly("q", &rates::SePair::q);
  py::class_<rates::LinkBudget>(m, "LinkBudget")
      .def(py::init<>())
      .def_readwrite("snr", &rates::LinkBudget::snr)
      .def_readwrite("k", &rates::LinkBudget::k)
      .def_readwrite("q", &rates::LinkBudget::q);
  m.def("inband_power", &rates::inband_power, py::arg("budget"));
  m.def("oob_power", &rates::oob_power, py::arg("budget"));
  m.def("cross_power", &rates::cross_power, py::arg("budget"));
  m.def("pr_event", &rates::pr_event, py::arg("budget"), py::arg("event"));
  m.def("event_conditional_se", &rates::event_conditional_se, py::arg("budget"), py::arg("event"),
        py::arg("policy"), py::arg("slot_owner"));
  m.def("event_a_timeshare_se", &rates::event_a_timeshare_se, py::arg("budget"), py::arg("zeta"));
  m.def("ue_ergodic_se", &rates::ue_ergodic_se, py::arg("snr"), py::arg("budget"),
        py::arg("zeta_own"), py::arg("co"));
  m.def("ue_baseline_se", &rates::ue_baseline_se, py::arg("snr"), py::arg("budget"));
  m.def("two_mo_sum_se", &rates::two_mo_sum_se, py::arg("snr"), py::arg("x_ues"),
        py::arg("y_ues"), py::arg("policy"));
  m.def("oob_se_gain", &rates::oob_se_gain, py::arg("snr"), py::arg("x_ues"), py::arg("co"));
  m.def("oob_se_gain_low_snr", &rates::oob_se_gain_low_snr, py::arg("snr"), py::arg("x_ues"),
        py::arg("co"));
  m.def("oob_se_gain_high_snr", &rates::oob_se_gain_high_snr, py::arg("x_ues"), py::arg("co"));
  m.def("coop_gain_bound", &rates::coop_gain_bound, py::arg("x_ues"));
  py::class_<rates::MultiMoBudget>(m, "MultiMoBudget")
      .def(py::init<>())
      .def_readwrite("m_ops", &rates::MultiMoBudget::m_ops)
      .def_readwrite("n", &rates::MultiMoBudget::n)
      .def_readwrite("l", &rates::MultiMoBudget::l)
      .def_readwrite("beta", &rates::MultiMoBudget::beta)
      .def_readwrite("snr", &rates::MultiMoBudget::snr)
      .def_readwrite("zeta1", &rates::MultiMoBudget::zeta1)
      .def_readwrite("co", &rates::MultiMoBudget::co);
  py::class_<rates::MultiMoGains>(m, "MultiMoGains")
      .def_readonly("oob_gain", &rates::MultiMoGains::oob_gain)
      .def_readonly("coop_bound", &rates::MultiMoGains::coop_bound);
  m.def("multi_mo_rate", &rates::multi_mo_rate, py::arg("budget"));
  m.def("multi_mo_baseline", &rates::multi_mo_baseline, py::arg("budget"));
  m.def("multi_mo_conditioned_rate", &rates::multi_mo_conditioned_rate, py::arg("budget"));
  m.def("multi_mo_gains", &rates::multi_mo_gains, py::arg("budget"));

  // simulation
  py::class_<sim::SystemConfig>(m, "SystemConfig")
      .def(py::init<>())
      .def_readwrite("num_operators", &sim::SystemConfig::num_operators)
      .def_readwrite("elements", &sim::SystemConfig::elements)
      .def_readwrite("ues", &sim::SystemConfig::ues)
      .def_readwrite("paths", &sim::SystemConfig::paths)
      .def_readwrite("snr", &sim::SystemConfig::snr)
      .def_readwrite("scheme", &sim::SystemConfig::scheme)
      .def_readwrite("geometry", &sim::SystemConfig::geometry)
      .def_readwrite("slots", &sim::SystemConfig::slots)
      .def_readwrite("seed", &sim::SystemConfig::seed)
      .def_readwrite("campaign_id", &sim::SystemConfig::campaign_id)
      .def_readwrite("force_oob_align", &sim::SystemConfig::force_oob_align)
      .def_readwrite("balanced_oob_pathloss", &sim::SystemConfig::balanced_oob_pathloss)
      .def_readwrite("with_grid_opt", &sim::SystemConfig::with_grid_opt)
      .def_readwrite("grid_points", &sim::SystemConfig::grid_points);
  py::class_<sim::EventStats>(m, "EventStats")
      .def_readonly("count", &sim::EventStats::count)
      .def_readonly("se_k", &sim::EventStats::se_k)
      .def_readonly("se_q", &sim::EventStats::se_q)
      .def_readonly("pow_k", &sim::EventStats::pow_k)
      .def_readonly("pow_q", &sim::EventStats::pow_q);
  py::class_<sim::RateReport>(m, "RateReport")
      .def_readonly("num_operators", &sim::RateReport::num_operators)
      .def_readonly("slots", &sim::RateReport::slots)
      .def_readonly("per_operator_se", &sim::RateReport::per_operator_se)
      .def_readonly("per_operator_se_no_oob", &sim::RateReport::per_operator_se_no_oob)
      .def_readonly("per_operator_se_grid", &sim::RateReport::per_operator_se_grid)
      .def_readonly("analytic_se", &sim::RateReport::analytic_se)
      .def_readonly("analytic_se_no_oob", &sim::RateReport::analytic_se_no_oob)
      .def_readonly("rel_error", &sim::RateReport::rel_error)
      .def_property_readonly("events",
                             [](const sim::RateReport& r) {
                               return std::vector<sim::EventStats>(r.events.begin(),
                                                                   r.events.end());
                             })
      .def_readonly("align_histogram", &sim::RateReport::align_histogram)
      .def_readonly("phi_a_samples", &sim::RateReport::phi_a_samples);
  m.def("run_campaign", &sim::run_campaign, py::arg("config"),
        py::call_guard<py::gil_scoped_release>());
  py::class_<sim::SweepResult>(m, "SweepResult")
      .def_readonly("value", &sim::SweepResult::value)
      .def_readonly("report", &sim::SweepResult::report);
  m.def("sweep", &sim::sweep, py::arg("base"), py::arg("axis"), py::arg("values"),
        py::call_guard<py::gil_scoped_release>());

  // config front end
  py::class_<ExperimentSpec>(m, "ExperimentSpec")
      .def(py::init<>())
      .def_readwrite("name", &ExperimentSpec::name)
      .def_readwrite("base", &ExperimentSpec::base)
      .def_readwrite("sweep_axis", &ExperimentSpec::sweep_axis)
      .def_readwrite("sweep_values", &ExperimentSpec::sweep_values)
      .def_readwrite("output", &ExperimentSpec::output)
      .def_readwrite("preset", &ExperimentSpec::preset);
  m.def("parse_config", &parse_config, py::arg("text"));
  m.def("render", &render, py::arg("spec"));
  m.def("preset_names", [] { return preset_names(); });
}
