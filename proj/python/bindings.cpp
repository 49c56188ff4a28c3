#include "qqespm/baseline.hpp"
#include "qqespm/csv.hpp"
#include "qqespm/engine.hpp"
#include "qqespm/error.hpp"
#include "qqespm/ilqtree.hpp"
#include "qqespm/pattern.hpp"
#include "qqespm/stats.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <optional>

namespace py = pybind11;

namespace {

using namespace qqespm;

geometry geometry_from_tuple(const py::tuple& t) {
    if (t.size() == 2) return point{t[0].cast<double>(), t[1].cast<double>()};
    if (t.size() == 4) {
        return rect{t[0].cast<double>(), t[1].cast<double>(), t[2].cast<double>(),
                    t[3].cast<double>()};
    }
    throw py::value_error("geometry must be an (x, y) or (min_x, min_y, max_x, max_y) tuple");
}

poi make_poi(std::string id, std::vector<std::string> keywords, double lon, double lat,
             std::optional<py::tuple> geom) {
    poi p;
    p.id = std::move(id);
    for (std::string& kw : keywords) p.keywords.push_back(normalize_keyword(kw));
    std::sort(p.keywords.begin(), p.keywords.end());
    p.keywords.erase(std::unique(p.keywords.begin(), p.keywords.end()), p.keywords.end());
    if (p.keywords.empty() || p.keywords.front().empty()) {
        throw py::value_error("POI needs at least one non-empty keyword");
    }
    p.location = point{lon, lat};
    p.geom = geom ? geometry_from_tuple(*geom) : geometry(p.location);
    if (!mbr(p.geom).contains(p.location)) {
        throw py::value_error("POI location must lie within its geometry MBR");
    }
    return p;
}

topo_predicate predicate_from_name(const std::string& name) {
    const auto pred = topo_predicate_from_string(name);
    if (!pred) throw py::value_error("unknown relation '" + name + "'");
    return *pred;
}

// Owns the index; query results are returned as id tuples so no pointers
// into the C++ storage escape to python.
struct py_index {
    il_quadtree ilq;
};

std::vector<std::vector<std::string>> run_query(const py_index& index,
                                                const spatial_pattern& p,
                                                const std::string& algo) {
    if (algo == "qqespm") return match_ids(qqespm_query(index.ilq, p));
    if (algo == "qqsimple") return match_ids(qq_simple_query(index.ilq, p));
    throw py::value_error("algo must be 'qqespm' or 'qqsimple'");
}

} // namespace

PYBIND11_MODULE(_qqespm, m) {
    m.doc() = "QQ-SPM spatial pattern matching engine";

    py::register_exception<parse_error>(m, "ParseError", PyExc_ValueError);
    py::register_exception<data_error>(m, "DataError", PyExc_ValueError);

    py::class_<poi>(m, "Poi")
        .def(py::init(&make_poi), py::arg("id"), py::arg("keywords"), py::arg("lon"),
             py::arg("lat"), py::arg("geometry") = std::nullopt)
        .def_readonly("id", &poi::id)
        .def_readonly("name", &poi::name)
        .def_readonly("keywords", &poi::keywords)
        .def_property_readonly("location",
                               [](const poi& p) { return py::make_tuple(p.location.x, p.location.y); })
        .def_property_readonly("mbr",
                               [](const poi& p) {
                                   const rect r = mbr(p.geom);
                                   return py::make_tuple(r.min_x, r.min_y, r.max_x, r.max_y);
                               })
        .def("__repr__", [](const poi& p) { return "<Poi '" + p.id + "'>"; });

    py::class_<spatial_pattern>(m, "Pattern")
        .def_property_readonly("n_vertices",
                               [](const spatial_pattern& p) { return p.vertices.size(); })
        .def_property_readonly("keywords",
                               [](const spatial_pattern& p) {
                                   std::vector<std::string> out;
                                   for (const auto& v : p.vertices) out.push_back(v.keyword);
                                   return out;
                               })
        .def("to_json", &serialize_pattern)
        .def("__repr__", [](const spatial_pattern& p) {
            return "<Pattern " + std::to_string(p.vertices.size()) + " vertices, " +
                   std::to_string(p.edges.size()) + " edges>";
        });

    py::class_<py_index>(m, "Index")
        .def_property_readonly("n_pois",
                               [](const py_index& i) { return i.ilq.pois().size(); })
        .def_property_readonly("n_keywords",
                               [](const py_index& i) { return i.ilq.trees().size(); });

    m.def("parse_pattern", [](const std::string& text) { return parse_pattern(text); },
          py::arg("json_text"), "Parse and validate a pattern document.");

    m.def("load_pois_csv",
          [](const std::string& path) { return load_pois_csv(path); }, py::arg("path"));

    m.def(
        "build_index",
        [](std::vector<poi> pois, int capacity, int max_depth) {
            const rect region = default_root_region(pois);
            return py_index{build_ilq(std::move(pois), region, capacity, max_depth)};
        },
        py::arg("pois"), py::arg("capacity") = 64, py::arg("max_depth") = 16,
        "Build the IL-Quadtree over the POIs (root region = padded dataset MBR).");

    m.def("qqespm_query",
          [](const py_index& i, const spatial_pattern& p) { return run_query(i, p, "qqespm"); },
          py::arg("index"), py::arg("pattern"),
          "All matches as lists of POI ids, one id per pattern vertex.");
    m.def("qq_simple_query",
          [](const py_index& i, const spatial_pattern& p) { return run_query(i, p, "qqsimple"); },
          py::arg("index"), py::arg("pattern"));
    m.def("brute_force_query",
          [](const std::vector<poi>& pois, const spatial_pattern& p) {
              return match_ids(brute_force_query(pois, p));
          },
          py::arg("pois"), py::arg("pattern"));

    m.def("relation_holds",
          [](const std::string& name, const py::tuple& a, const py::tuple& b) {
              return holds(predicate_from_name(name), geometry_from_tuple(a),
                           geometry_from_tuple(b));
          },
          py::arg("relation"), py::arg("a"), py::arg("b"),
          "Evaluate one DE-9IM predicate on (x, y) or (min_x, min_y, max_x, max_y) tuples.");
    m.def("satisfied_predicates",
          [](const py::tuple& a, const py::tuple& b) {
              std::vector<std::string> out;
              for (topo_predicate p :
                   satisfied_predicates(geometry_from_tuple(a), geometry_from_tuple(b))) {
                  out.emplace_back(to_string(p));
              }
              return out;
          },
          py::arg("a"), py::arg("b"));

    m.def("z_test_means",
          [](const std::vector<double>& a, const std::vector<double>& b) {
              const z_test_result r = z_test_means(a, b);
              return py::make_tuple(r.z, r.p_value);
          },
          py::arg("sample_a"), py::arg("sample_b"),
          "Two-sample Z test; returns (z, two_sided_p).");

    m.attr("__version__") = "1.0.0";
}
