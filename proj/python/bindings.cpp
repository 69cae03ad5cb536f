#include <sstream>

#include <pybind11/chrono.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "amass/analysis.hpp"
#include "amass/cc.hpp"
#include "amass/cli.hpp"
#include "amass/domain.hpp"
#include "amass/ground_truth.hpp"
#include "amass/store.hpp"

namespace py = pybind11;
using namespace amass;

namespace {

Date to_date(const std::string& text) {
  auto d = parse_date(text);
  if (!d) throw py::value_error("not a YYYY-MM-DD date: " + text);
  return *d;
}

py::dict view_dict(const store::AsOfView& v) {
  py::dict d;
  d["tld"] = v.tld;
  d["cutoff"] = format_date(v.cutoff);
  d["ct_names"] = v.ct_names;
  d["cc_names"] = v.cc_names;
  d["per_log_names"] = v.per_log_names;
  d["expired_only_names"] = v.expired_only_names;
  return d;
}

}  // namespace

PYBIND11_MODULE(_cctld_amass, m) {
  m.doc() = "Bindings for the cctld-amass core library";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<cc::SnapshotIdError>(m, "SnapshotIdError", PyExc_ValueError);
  py::register_exception<store::StoreError>(m, "StoreError");
  py::register_exception<analysis::AnalysisError>(m, "AnalysisError");

  m.def("canonical_name", [](const std::string& raw) { return std::string(DomainName::parse(raw).str()); },
        py::arg("name"));
  m.def("to_unicode", [](const std::string& name) { return to_unicode(name); }, py::arg("name"));

  py::enum_<SuffixPolicy>(m, "SuffixPolicy").value("LENIENT", SuffixPolicy::Lenient).value("STRICT", SuffixPolicy::Strict);

  py::class_<SuffixRuleSet>(m, "SuffixRuleSet")
      .def_static("parse", [](const std::string& text, std::string tag) { return SuffixRuleSet::parse(text, tag); },
                  py::arg("text"), py::arg("version_tag") = "")
      .def_property_readonly("version_tag", &SuffixRuleSet::version_tag)
      .def("__len__", &SuffixRuleSet::size)
      .def("registered_domain",
           [](const SuffixRuleSet& rules, const std::string& name, SuffixPolicy policy) {
             return std::string(rules.registered_domain(DomainName::parse(name), policy).str());
           },
           py::arg("name"), py::arg("policy") = SuffixPolicy::Lenient);

  m.def("snapshot_date", [](const std::string& id) { return format_date(cc::CrawlSnapshotId::parse(id).derived_date()); },
        py::arg("snapshot_id"));

  py::class_<store::Store>(m, "Store")
      .def(py::init([](const std::filesystem::path& dir) { return std::make_unique<store::Store>(dir); }),
           py::arg("dir"))
      .def("flush", &store::Store::flush)
      .def("compact",
           [](store::Store& s) -> py::object {
             auto seg = s.compact();
             if (!seg) return py::none();
             return py::int_(seg->record_count);
           })
      .def("segment_count", [](const store::Store& s) { return s.segments().size(); })
      .def("query_asof",
           [](const store::Store& s, const std::string& tld, const std::string& cutoff, bool strict) {
             return view_dict(s.query_asof(tld, to_date(cutoff), strict));
           },
           py::arg("tld"), py::arg("cutoff"), py::arg("strict") = false);

  py::class_<analysis::CoverageReport>(m, "CoverageReport")
      .def_readonly("tld", &analysis::CoverageReport::tld)
      .def_readonly("total", &analysis::CoverageReport::total)
      .def_readonly("covered", &analysis::CoverageReport::covered)
      .def_readonly("not_covered", &analysis::CoverageReport::not_covered)
      .def_readonly("ct_only", &analysis::CoverageReport::ct_only)
      .def_readonly("cc_only", &analysis::CoverageReport::cc_only)
      .def_readonly("both", &analysis::CoverageReport::both)
      .def_readonly("ct_total", &analysis::CoverageReport::ct_total)
      .def_readonly("cc_total", &analysis::CoverageReport::cc_total)
      .def_readonly("amassed_not_in_zone", &analysis::CoverageReport::amassed_not_in_zone);

  m.def("coverage_partition",
        [](const std::string& tld, std::uint64_t total, std::uint64_t ct_only, std::uint64_t cc_only,
           std::uint64_t both) {
          return analysis::CoverageReport::from_partition(tld, Date{}, total, ct_only, cc_only, both);
        },
        py::arg("tld"), py::arg("total"), py::arg("ct_only"), py::arg("cc_only"), py::arg("both"));
  m.def("identity_violations", &analysis::identity_violations, py::arg("report"), py::arg("tolerance") = 0);
  m.def("display_percent", &analysis::display_percent, py::arg("part"), py::arg("whole"));
  m.def("quantile", &analysis::quantile, py::arg("sorted_values"), py::arg("p"));
  m.def("lag_cdf",
        [](const std::map<std::string, std::string>& first_ct, const std::map<std::string, std::string>& first_zone) {
          std::map<std::string, Date> ct, zone;
          for (const auto& [k, v] : first_ct) ct.emplace(k, to_date(v));
          for (const auto& [k, v] : first_zone) zone.emplace(k, to_date(v));
          auto cdf = analysis::lag_cdf(ct, zone);
          py::list points;
          for (const auto& p : cdf.points) points.append(py::make_tuple(p.lag_days, p.count, p.cumulative_fraction));
          py::dict d;
          d["points"] = points;
          d["sample_count"] = cdf.sample_count;
          d["excluded_never_seen"] = cdf.excluded_never_seen;
          d["clamped_negative"] = cdf.clamped_negative;
          return d;
        },
        py::arg("first_ct_seen"), py::arg("first_zone_seen"));

  m.def("run_cli",
        [](const std::vector<std::string>& args) {
          std::ostringstream out, err;
          int code;
          {
            py::gil_scoped_release release;
            code = cli::run_cli(args, out, err);
          }
          return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs the command line tool in-process; returns (exit_code, stdout, stderr).");
}
