// Python bindings. Integers cross the boundary as Python ints (through their
// decimal strings); graphs, slb presentations and reports as JSON-shaped
// dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "logmonoid/hilbert.hpp"
#include "logmonoid/io.hpp"

namespace py = pybind11;
using namespace logmonoid;

namespace {

py::object to_py(const Integer& z)
{
    return py::module_::import("builtins").attr("int")(py::str(z.get_str()));
}

Integer from_py(const py::handle& h)
{
    return Integer(py::str(h).cast<std::string>());
}

py::list to_py(const IntVector& v)
{
    py::list out;
    for (const auto& z : v)
        out.append(to_py(z));
    return out;
}

py::list to_py(const std::vector<IntVector>& vs)
{
    py::list out;
    for (const auto& v : vs)
        out.append(to_py(v));
    return out;
}

IntVector vector_from_py(const py::iterable& it)
{
    IntVector v;
    for (const auto& h : it)
        v.push_back(from_py(h));
    return v;
}

IntMatrix matrix_from_py(const py::sequence& rows, std::size_t cols)
{
    std::vector<IntVector> rs;
    for (const auto& r : rows)
        rs.push_back(vector_from_py(r.cast<py::iterable>()));
    if (!rs.empty())
        cols = rs.front().size();
    for (const auto& r : rs)
        if (r.size() != cols)
            throw PreconditionError("matrix rows must have equal length");
    return IntMatrix::from_rows(rs, cols);
}

// dicts go through Python's json module so that big integers survive.
io::Json json_from_py(const py::object& doc)
{
    if (py::isinstance<py::str>(doc))
        return io::parse_json_text(doc.cast<std::string>());
    auto dumps = py::module_::import("json").attr("dumps");
    return io::parse_json_text(dumps(doc).cast<std::string>());
}

py::object json_to_py(const io::Json& j)
{
    return py::module_::import("json").attr("loads")(j.dump());
}

DecoratedDualGraph graph_from_py(const py::object& doc, bool strict)
{
    return io::graph_from_json(json_from_py(doc), strict);
}

py::dict group_to_py(const AbelianGroup& g)
{
    py::dict d;
    d["free_rank"] = g.free_rank;
    d["invariant_factors"] = to_py(g.invariant_factors);
    d["torsion_order"] = to_py(g.torsion_order());
    d["description"] = g.describe();
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Exact computations with fine monoids, dual graphs and slb presentations";

    static py::exception<PreconditionError> input_error(m, "InputError", PyExc_ValueError);
    static py::exception<InvariantViolation> internal_error(m, "InternalError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p)
                std::rethrow_exception(p);
        } catch (const PreconditionError& e) {
            py::set_error(input_error, e.what());
        } catch (const InvariantViolation& e) {
            py::set_error(internal_error, e.what());
        } catch (const NonPointedCone& e) {
            py::set_error(input_error, e.what());
        }
    });

    py::class_<MonoidPresentation>(m, "Presentation")
        .def(py::init(&parse_presentation), py::arg("text"))
        .def_static(
            "from_relations",
            [](std::size_t n, const py::list& rels) {
                std::vector<Relation> rs;
                for (const auto& r : rels) {
                    auto pair = r.cast<py::tuple>();
                    rs.push_back({vector_from_py(pair[0]), vector_from_py(pair[1])});
                }
                return MonoidPresentation(n, rs);
            },
            py::arg("n_gens"), py::arg("relations"))
        .def_property_readonly("n_gens", &MonoidPresentation::n_gens)
        .def_property_readonly("labels", &MonoidPresentation::labels)
        .def_property_readonly("relations",
                               [](const MonoidPresentation& p) {
                                   py::list out;
                                   for (const auto& r : p.relations())
                                       out.append(py::make_tuple(to_py(r.lhs), to_py(r.rhs)));
                                   return out;
                               })
        .def("gp_image", [](const MonoidPresentation& p, const py::iterable& x) { return to_py(p.gp_image(vector_from_py(x))); })
        .def("__str__", &MonoidPresentation::to_string)
        .def("__repr__", [](const MonoidPresentation& p) { return "Presentation('" + p.to_string() + "')"; });

    m.def("groupification", [](const MonoidPresentation& p) { return group_to_py(groupification(p)); });
    m.def("element_eq", [](const MonoidPresentation& p, const py::iterable& x, const py::iterable& y) {
        return element_eq(MonoidElement(p, vector_from_py(x)), MonoidElement(p, vector_from_py(y)));
    });
    m.def(
        "membership",
        [](const MonoidPresentation& p, const py::iterable& g, std::size_t bound) {
            auto r = membership(p, vector_from_py(g), bound ? bound : default_membership_bound());
            py::dict d;
            d["status"] = to_string(r.status);
            d["witness"] = r.status == MembershipResult::Status::Yes ? py::object(to_py(r.witness)) : py::none();
            d["reason"] = r.reason;
            return d;
        },
        py::arg("p"), py::arg("g"), py::arg("bound") = 0);
    m.def("is_sharp", [](const MonoidPresentation& p) {
        auto r = is_sharp(p);
        py::dict d;
        d["sharp"] = r.sharp;
        d["reason"] = r.reason;
        if (r.sharp)
            d["functional"] = to_py(r.beta);
        else
            d["unit_generator"] = r.unit_generator;
        return d;
    });
    m.def("saturate", [](const MonoidPresentation& p) {
        auto r = saturate(p);
        py::dict d;
        d["hilbert_basis"] = to_py(r.hilbert_basis);
        d["torsion"] = group_to_py(r.torsion);
        d["sharp_part"] = r.sharp_part;
        return d;
    });
    m.def("dual_hilbert_basis", [](const MonoidPresentation& p) { return to_py(dual_monoid(p).hilbert_basis); });
    m.def("double_dual_hilbert_basis", [](const MonoidPresentation& p) { return to_py(double_dual(p).hilbert_basis); });
    m.def("monoid_command", [](const std::string& sub, const std::string& text) {
        return json_to_py(io::monoid_command(sub, parse_presentation(text)));
    });

    m.def("smith_diagonal", [](const py::sequence& rows) {
        return to_py(smith_normal_form(matrix_from_py(rows, 0)).diagonal());
    });
    m.def(
        "kernel_basis", [](const py::sequence& rows, std::size_t cols) { return to_py(kernel_basis(matrix_from_py(rows, cols))); },
        py::arg("rows"), py::arg("cols") = 0);
    m.def(
        "hilbert_basis",
        [](const py::sequence& inequalities, std::size_t dim) {
            std::vector<IntVector> rows;
            for (const auto& r : inequalities)
                rows.push_back(vector_from_py(r.cast<py::iterable>()));
            return to_py(hilbert_basis(rows, dim));
        },
        py::arg("inequalities"), py::arg("dim"));

    m.def(
        "analyze",
        [](const py::object& doc, bool strict, std::size_t bound) {
            return json_to_py(io::analyze_graph(graph_from_py(doc, strict), {strict, bound}));
        },
        py::arg("graph"), py::arg("strict_contact") = false, py::arg("bound") = 0);
    m.def(
        "canonical_graph", [](const py::object& doc) { return io::serialize_graph(graph_from_py(doc, false)); },
        py::arg("graph"));
    m.def("basic_monoid", [](const py::object& doc) { return build_basic_monoid(graph_from_py(doc, false)).presentation; });
    m.def("saturation_count", [](const py::object& doc) {
        return to_py(saturation_count(build_basic_monoid(graph_from_py(doc, false))));
    });
    m.def("varrho_saturation_count", [](const py::object& doc) {
        return to_py(varrho_saturation_count(graph_from_py(doc, false)));
    });
    m.def("tropical_witness", [](const py::object& doc) -> py::object {
        auto t = tropical_feasible(build_basic_monoid(graph_from_py(doc, false)));
        if (t.witness)
            return to_py(*t.witness);
        return py::none();
    });
    m.def(
        "check_slb", [](const py::object& doc, std::size_t bound) { return json_to_py(io::check_slb(io::slb_from_json(json_from_py(doc)), bound)); },
        py::arg("doc"), py::arg("bound") = 0);
}
