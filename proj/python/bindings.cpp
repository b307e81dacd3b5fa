#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <fmt/format.h>

#include "rainrule/ball_log.hpp"
#include "rainrule/dl_reference.hpp"
#include "rainrule/error.hpp"
#include "rainrule/run_curves.hpp"
#include "rainrule/score_stats.hpp"
#include "rainrule/target_engine.hpp"

namespace py = pybind11;
using namespace rainrule;

namespace {

std::string iso_date(const std::chrono::year_month_day& d) {
    if (!d.ok()) return {};
    return fmt::format("{:04}-{:02}-{:02}", static_cast<int>(d.year()), static_cast<unsigned>(d.month()),
                       static_cast<unsigned>(d.day()));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Rain-rule target revision from ball-by-ball scoring curves";

    static py::exception<Error> error(m, "RainruleError", PyExc_RuntimeError);
    static py::exception<ParseError> parse_error(m, "ParseError", error.ptr());
    // Translators run newest first, so the subclass is registered last.
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object type = error;
            if (const auto* pe = dynamic_cast<const ParseError*>(&e)) {
                type = parse_error;
                PyErr_SetObject(type.ptr(), py::make_tuple(e.what(), to_string(e.code()), pe->line(), pe->byte()).ptr());
                return;
            }
            PyErr_SetObject(type.ptr(), py::make_tuple(e.what(), to_string(e.code())).ptr());
        }
    });

    py::enum_<MatchFormat>(m, "MatchFormat")
        .value("ODI", MatchFormat::odi)
        .value("T20I", MatchFormat::t20i)
        .value("IPL", MatchFormat::ipl);
    m.def("scheduled_balls", &scheduled_balls);

    py::enum_<ExtrasKind>(m, "ExtrasKind")
        .value("none", ExtrasKind::none)
        .value("wide", ExtrasKind::wide)
        .value("no_ball", ExtrasKind::no_ball)
        .value("bye", ExtrasKind::bye)
        .value("leg_bye", ExtrasKind::leg_bye)
        .value("penalty", ExtrasKind::penalty);

    py::class_<DeliveryEvent>(m, "DeliveryEvent")
        .def(py::init<>())
        .def_readwrite("over", &DeliveryEvent::over)
        .def_readwrite("ball_in_over", &DeliveryEvent::ball_in_over)
        .def_readwrite("batter_runs", &DeliveryEvent::batter_runs)
        .def_readwrite("extras_runs", &DeliveryEvent::extras_runs)
        .def_readwrite("extras_kind", &DeliveryEvent::extras_kind)
        .def_readwrite("wicket", &DeliveryEvent::wicket)
        .def_readwrite("legal", &DeliveryEvent::legal)
        .def_property_readonly("total_runs", &DeliveryEvent::total_runs);

    py::class_<InningsRecord>(m, "InningsRecord")
        .def(py::init<>())
        .def_readwrite("innings_index", &InningsRecord::innings_index)
        .def_readwrite("batting_team", &InningsRecord::batting_team)
        .def_readwrite("deliveries", &InningsRecord::deliveries);

    py::class_<MatchRecord>(m, "MatchRecord")
        .def(py::init<>())
        .def_readwrite("match_id", &MatchRecord::match_id)
        .def_readwrite("format", &MatchRecord::format)
        .def_property_readonly("date", [](const MatchRecord& r) { return iso_date(r.date); })
        .def_readwrite("teams", &MatchRecord::teams)
        .def_readwrite("venue", &MatchRecord::venue)
        .def_readwrite("innings", &MatchRecord::innings)
        .def_readwrite("shortened", &MatchRecord::shortened);

    py::class_<ParsedMatch>(m, "ParsedMatch")
        .def_readonly("match", &ParsedMatch::match)
        .def_property_readonly("dropped_innings", [](const ParsedMatch& p) { return p.diagnostics.dropped_innings; });

    m.def(
        "parse_match",
        [](py::bytes raw, std::optional<MatchFormat> hint, std::string match_id) {
            return parse_match(std::string(raw), hint, std::move(match_id));
        },
        py::arg("raw"), py::arg("format_hint") = py::none(), py::arg("match_id") = "");
    m.def("parse_ball_log_csv", &parse_ball_log_csv, py::arg("text"), py::arg("format_hint") = py::none());
    m.def("write_ball_log_csv", &write_ball_log_csv);

    py::class_<FileDiagnostic>(m, "FileDiagnostic")
        .def_readonly("path", &FileDiagnostic::path)
        .def_readonly("message", &FileDiagnostic::message);
    py::class_<Corpus>(m, "Corpus")
        .def_readonly("matches", &Corpus::matches)
        .def_readonly("diagnostics", &Corpus::diagnostics)
        .def_readonly("dropped_innings", &Corpus::dropped_innings);
    m.def("load_corpus", &load_corpus, py::arg("directory"), py::arg("format") = py::none(),
          py::call_guard<py::gil_scoped_release>());

    py::class_<TrajectoryPoint>(m, "TrajectoryPoint")
        .def_readonly("ball", &TrajectoryPoint::ball)
        .def_readonly("cumulative_runs", &TrajectoryPoint::cumulative_runs)
        .def_readonly("wickets_fallen", &TrajectoryPoint::wickets_fallen)
        .def("__repr__", [](const TrajectoryPoint& p) {
            return fmt::format("TrajectoryPoint(ball={}, cumulative_runs={}, wickets_fallen={})", p.ball,
                               p.cumulative_runs, p.wickets_fallen);
        });
    py::class_<InningsTrajectory>(m, "InningsTrajectory")
        .def_readonly("points", &InningsTrajectory::points)
        .def_readonly("total", &InningsTrajectory::total)
        .def_readonly("completed_balls", &InningsTrajectory::completed_balls);
    m.def("trajectory", &trajectory, py::arg("innings"), py::arg("format"));

    py::class_<Histogram>(m, "Histogram")
        .def_readonly("bin_width", &Histogram::bin_width)
        .def_readonly("bin_lower_edges", &Histogram::bin_lower_edges)
        .def_readonly("counts", &Histogram::counts)
        .def_readonly("n_samples", &Histogram::n_samples);
    py::class_<NormalFit>(m, "NormalFit")
        .def_readonly("xi", &NormalFit::xi)
        .def_readonly("sigma", &NormalFit::sigma)
        .def_readonly("amplitude", &NormalFit::amplitude)
        .def_readonly("rss", &NormalFit::rss)
        .def_readonly("iterations", &NormalFit::iterations)
        .def("__call__", &NormalFit::operator());
    m.def("totals", [](const std::vector<MatchRecord>& c, MatchFormat f, int inn) { return totals(c, f, inn); },
          py::arg("matches"), py::arg("format"), py::arg("innings"));
    m.def("build_histogram", [](const std::vector<int>& v, double w) { return build_histogram(v, w); },
          py::arg("values"), py::arg("bin_width"));
    m.def("fit_normal", py::overload_cast<const Histogram&>(&fit_normal), py::arg("histogram"));
    m.def("default_bin_width", &default_bin_width);

    py::class_<CurvePoint>(m, "CurvePoint")
        .def_readonly("ball", &CurvePoint::ball)
        .def_readonly("mean_score", &CurvePoint::mean_score)
        .def_readonly("n_contributing", &CurvePoint::n_contributing);
    py::class_<WicketCurve>(m, "WicketCurve")
        .def_readonly("wickets", &WicketCurve::wickets)
        .def_readonly("format", &WicketCurve::format)
        .def_readonly("innings_index", &WicketCurve::innings_index)
        .def_readonly("points", &WicketCurve::points);
    py::class_<PolyFit>(m, "PolyFit")
        .def(py::init([](double a, double b, double c, int degree) { return PolyFit{a, b, c, degree, 0.0}; }),
             py::arg("a"), py::arg("b"), py::arg("c"), py::arg("degree") = 3)
        .def_readonly("a", &PolyFit::a)
        .def_readonly("b", &PolyFit::b)
        .def_readonly("c", &PolyFit::c)
        .def_readonly("degree", &PolyFit::degree)
        .def_readonly("rss", &PolyFit::rss)
        .def("__call__", &PolyFit::operator());
    m.def(
        "wicket_curve",
        [](const std::vector<MatchRecord>& c, MatchFormat f, int inn, int w, int support) {
            return wicket_curve(c, f, inn, w, support);
        },
        py::arg("matches"), py::arg("format"), py::arg("innings"), py::arg("wickets"),
        py::arg("min_support") = kDefaultMinSupport);
    m.def("fit_poly", &fit_poly, py::arg("curve"), py::arg("degree") = 3, py::arg("weighted") = true);

    py::class_<Interruption>(m, "Interruption")
        .def(py::init([](int stop, int restart) { return Interruption{stop, restart}; }), py::arg("stop"),
             py::arg("restart"))
        .def_readwrite("stop", &Interruption::stop)
        .def_readwrite("restart", &Interruption::restart);
    py::class_<InterruptionScenario>(m, "InterruptionScenario")
        .def(py::init([](int n, int m_, int N, int target, int current, int wickets, std::vector<Interruption> later) {
                 return InterruptionScenario{n, m_, N, target, current, wickets, std::move(later)};
             }),
             py::arg("n"), py::arg("m"), py::arg("N"), py::arg("target_score"), py::arg("current_score"),
             py::arg("wickets") = 0, py::arg("later") = std::vector<Interruption>{})
        .def_readwrite("n", &InterruptionScenario::n)
        .def_readwrite("m", &InterruptionScenario::m)
        .def_readwrite("N", &InterruptionScenario::N)
        .def_readwrite("target_score", &InterruptionScenario::target_score)
        .def_readwrite("current_score", &InterruptionScenario::current_score)
        .def_readwrite("wickets", &InterruptionScenario::wickets_at_stoppage)
        .def_readwrite("later", &InterruptionScenario::later)
        .def("validate", &InterruptionScenario::validate);
    py::class_<RevisedTarget>(m, "RevisedTarget")
        .def_readonly("ratio", &RevisedTarget::ratio)
        .def_readonly("runs_remaining", &RevisedTarget::runs_remaining)
        .def_readonly("revised_total", &RevisedTarget::revised_total)
        .def_property_readonly("to_win", &RevisedTarget::to_win);
    m.def("area_full", &area_full, py::arg("fit"), py::arg("N"));
    m.def("area_interrupted", py::overload_cast<const PolyFit&, int, int, int>(&area_interrupted), py::arg("fit"),
          py::arg("n"), py::arg("m"), py::arg("N"));
    m.def("resource_ratio", &resource_ratio, py::arg("fit"), py::arg("scenario"));
    m.def("revise_target", &revise_target, py::arg("fit"), py::arg("scenario"));

    py::class_<DLCurve>(m, "DLCurve")
        .def_readonly("w", &DLCurve::w)
        .def_readonly("z0", &DLCurve::z0)
        .def_readonly("decay", &DLCurve::decay)
        .def_readonly("rss", &DLCurve::rss)
        .def("__call__", &DLCurve::operator());
    py::class_<DLFamily>(m, "DLFamily")
        .def_readonly("format", &DLFamily::format)
        .def_readonly("curves", &DLFamily::curves)
        .def_readonly("diagnostics", &DLFamily::diagnostics)
        .def_readonly("isotonic_adjusted", &DLFamily::isotonic_adjusted);
    py::class_<ResourceTable>(m, "ResourceTable")
        .def_property_readonly("max_overs", &ResourceTable::max_overs)
        .def_readonly("crossing_adjusted", &ResourceTable::crossing_adjusted)
        .def("percentage", &ResourceTable::percentage, py::arg("overs_remaining"), py::arg("wickets_lost"))
        .def("to_csv", &resource_table_csv);
    m.def(
        "fit_dl_family",
        [](const std::vector<MatchRecord>& c, MatchFormat f, int support) { return fit_dl_family(c, f, support); },
        py::arg("matches"), py::arg("format"), py::arg("min_support") = kDefaultMinSupport);
    m.def(
        "resource_table", [](const DLFamily& fam, int max_overs) { return resource_table(fam.curves, max_overs); },
        py::arg("family"), py::arg("max_overs"));
}
