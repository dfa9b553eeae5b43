#include "riccati/json_io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <utility>

namespace riccati {

namespace {

const Json& field(const Json& j, const char* key, const char* what) {
    if (!j.is_object()) {
        throw InvalidSpec(std::string(what) + ": expected a JSON object");
    }
    auto it = j.find(key);
    if (it == j.end()) {
        throw InvalidSpec(std::string(what) + ": missing field \"" + key + "\"");
    }
    return *it;
}

Index index_field(const Json& j, const char* key, const char* what) {
    const Json& v = field(j, key, what);
    if (!v.is_number_integer() && !v.is_number_unsigned()) {
        throw InvalidSpec(std::string(what) + ": field \"" + key + "\" must be an integer");
    }
    auto n = v.get<std::int64_t>();
    if (n < 0) {
        throw InvalidSpec(std::string(what) + ": field \"" + key + "\" must be nonnegative");
    }
    return static_cast<Index>(n);
}

double number_field(const Json& j, const char* key, const char* what) {
    const Json& v = field(j, key, what);
    if (!v.is_number()) {
        throw InvalidSpec(std::string(what) + ": field \"" + key + "\" must be a number");
    }
    return v.get<double>();
}

Json complex_entry(const Complex& z) { return Json::array({z.real(), z.imag()}); }

const char* criterion_name(UniquenessCriterion c) {
    switch (c) {
    case UniquenessCriterion::strict_contraction: return "strict-contraction";
    case UniquenessCriterion::dissipative: return "dissipative";
    case UniquenessCriterion::kernel_trivial: return "kernel-trivial";
    case UniquenessCriterion::not_unique: return "—";
    }
    return "—";
}

} // namespace

Json encode(const ComplexMatrix& m) {
    Json data = Json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            data.push_back(complex_entry(m(i, j)));
        }
    }
    return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Json encode(const Subspace& s) {
    return Json{{"ambient", s.ambient_dim()}, {"basis", encode(s.basis())}};
}

Json encode(const BlockOperator& b) {
    return Json{{"n0", b.n0},
                {"n1", b.n1},
                {"a0", encode(b.a0)},
                {"a1", encode(b.a1)},
                {"v", encode(b.v)}};
}

Json encode(const RiccatiSolution& sol) {
    Json delta = Json::array();
    for (int c : sol.selected_spectrum) delta.push_back(c);
    Json isolated;
    if (sol.is_isolated.has_value()) isolated = *sol.is_isolated;
    return Json{{"x", encode(sol.x)},
                {"residual", sol.residual},
                {"spectral", sol.is_spectral},
                {"isolated", std::move(isolated)},
                {"contractive", sol.is_contractive},
                {"delta", std::move(delta)}};
}

Json encode(const CanonicalDecomposition& d) {
    Json theta = Json::array();
    for (Index i = 0; i < d.theta.size(); ++i) theta.push_back(d.theta[i]);
    return Json{{"m00", encode(d.m00)},
                {"m01", encode(d.m01)},
                {"m10", encode(d.m10)},
                {"m11", encode(d.m11)},
                {"theta", std::move(theta)},
                {"w", encode(d.w)},
                {"frames", Json{{"m0_prime", encode(d.m0_prime)},
                                {"m1_prime", encode(d.m1_prime)}}}};
}

Json encode(const GraphReport& rep) {
    Json x;
    if (rep.x.has_value()) x = encode(*rep.x);
    return Json{{"is_graph", rep.is_graph},
                {"x", std::move(x)},
                {"norm_x", rep.norm_x},
                {"dist", rep.dist},
                {"ker_x", encode(rep.ker_x)},
                {"coker_x", encode(rep.coker_x)},
                {"reason", rep.reason}};
}

Json encode(const ContractiveFamily& fam) {
    Json members = Json::array();
    for (const auto& m : fam.members) {
        members.push_back(Json{{"l", encode(m.l)}, {"y", encode(m.y)}, {"residual", m.residual}});
    }
    return Json{{"base_x", encode(fam.base_x)},
                {"lattice_only", fam.lattice_only},
                {"members", std::move(members)}};
}

Json encode(const UniquenessReport& rep) {
    return Json{{"unique", rep.unique}, {"criterion", criterion_name(rep.criterion)}};
}

Json encode(const InstanceSpec& spec) {
    Json j{{"description", spec.description}};
    switch (spec.kind) {
    case InstanceSpec::Kind::involution:
        j["kind"] = "involution";
        j["k"] = spec.k_dim;
        break;
    case InstanceSpec::Kind::multiplication:
        j["kind"] = "multiplication";
        j["n"] = spec.grid_n;
        break;
    case InstanceSpec::Kind::random:
        j["kind"] = "random";
        j["n0"] = spec.n0;
        j["n1"] = spec.n1;
        j["seed"] = spec.seed;
        j["gap"] = spec.gap.has_value() ? Json(*spec.gap) : Json();
        break;
    case InstanceSpec::Kind::constructed_nonunique:
        j["kind"] = "constructed_nonunique";
        j["seed"] = spec.seed;
        break;
    }
    return j;
}

Json encode(const Instance& inst) {
    Json known = Json::array();
    for (const auto& x : inst.known_solutions) known.push_back(encode(x));
    return Json{{"spec", encode(inst.spec)},
                {"b", encode(inst.b)},
                {"known_solutions", std::move(known)}};
}

ComplexMatrix decode_matrix(const Json& j) {
    Index rows = index_field(j, "rows", "matrix");
    Index cols = index_field(j, "cols", "matrix");
    const Json& data = field(j, "data", "matrix");
    if (!data.is_array() || static_cast<Index>(data.size()) != rows * cols) {
        throw InvalidSpec("matrix: \"data\" must be an array of rows*cols entries");
    }
    ComplexMatrix m(rows, cols);
    Index k = 0;
    for (Index i = 0; i < rows; ++i) {
        for (Index c = 0; c < cols; ++c) {
            const Json& e = data[static_cast<std::size_t>(k++)];
            if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
                throw InvalidSpec("matrix: every data entry must be a [re, im] pair");
            }
            m(i, c) = Complex(e[0].get<double>(), e[1].get<double>());
        }
    }
    return m;
}

Subspace decode_subspace(const Json& j) {
    Index ambient = index_field(j, "ambient", "subspace");
    ComplexMatrix basis = decode_matrix(field(j, "basis", "subspace"));
    if (basis.rows() != ambient) {
        throw InvalidSpec("subspace: basis rows must equal the ambient dimension");
    }
    return Subspace::from_orthonormal(std::move(basis));
}

BlockOperator decode_block(const Json& j, const TolerancePolicy& pol) {
    BlockOperator b;
    b.n0 = index_field(j, "n0", "block operator");
    b.n1 = index_field(j, "n1", "block operator");
    b.a0 = decode_matrix(field(j, "a0", "block operator"));
    b.a1 = decode_matrix(field(j, "a1", "block operator"));
    b.v = decode_matrix(field(j, "v", "block operator"));
    b.validate(pol);
    return b;
}

InstanceSpec decode_spec(const Json& j) {
    const Json& kind = field(j, "kind", "instance spec");
    if (!kind.is_string()) {
        throw InvalidSpec("instance spec: field \"kind\" must be a string");
    }
    const std::string name = kind.get<std::string>();
    if (name == "involution") {
        return InstanceSpec::involution(index_field(j, "k", "instance spec"));
    }
    if (name == "multiplication") {
        return InstanceSpec::multiplication(index_field(j, "n", "instance spec"));
    }
    if (name == "random") {
        std::optional<double> gap;
        if (j.contains("gap") && !j["gap"].is_null()) {
            gap = number_field(j, "gap", "instance spec");
        }
        return InstanceSpec::random(index_field(j, "n0", "instance spec"),
                                    index_field(j, "n1", "instance spec"),
                                    static_cast<std::uint64_t>(index_field(j, "seed", "instance spec")),
                                    gap);
    }
    if (name == "constructed_nonunique") {
        return InstanceSpec::constructed_nonunique(
            static_cast<std::uint64_t>(index_field(j, "seed", "instance spec")));
    }
    throw InvalidSpec("instance spec: unknown kind \"" + name + "\"");
}

namespace {

bool array_is_flat(const Json& a) {
    for (const auto& e : a) {
        if (e.is_structured()) return false;
    }
    return true;
}

void append_double(std::string& out, double v) {
    if (!std::isfinite(v)) {
        out += "null";
        return;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}

void dump_rec(const Json& j, std::string& out, int depth) {
    switch (j.type()) {
    case Json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        for (auto it = j.cbegin(); it != j.cend(); ++it) {
            if (!first) out += ",\n";
            first = false;
            out.append(static_cast<std::size_t>(2 * (depth + 1)), ' ');
            out += Json(it.key()).dump();
            out += ": ";
            dump_rec(it.value(), out, depth + 1);
        }
        out += "\n";
        out.append(static_cast<std::size_t>(2 * depth), ' ');
        out += "}";
        return;
    }
    case Json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            return;
        }
        if (array_is_flat(j)) {
            out += "[";
            bool first = true;
            for (const auto& e : j) {
                if (!first) out += ", ";
                first = false;
                dump_rec(e, out, depth);
            }
            out += "]";
            return;
        }
        out += "[\n";
        bool first = true;
        for (const auto& e : j) {
            if (!first) out += ",\n";
            first = false;
            out.append(static_cast<std::size_t>(2 * (depth + 1)), ' ');
            dump_rec(e, out, depth + 1);
        }
        out += "\n";
        out.append(static_cast<std::size_t>(2 * depth), ' ');
        out += "]";
        return;
    }
    case Json::value_t::string:
        out += j.dump();
        return;
    case Json::value_t::boolean:
        out += j.get<bool>() ? "true" : "false";
        return;
    case Json::value_t::null:
        out += "null";
        return;
    case Json::value_t::number_integer:
        out += std::to_string(j.get<std::int64_t>());
        return;
    case Json::value_t::number_unsigned:
        out += std::to_string(j.get<std::uint64_t>());
        return;
    case Json::value_t::number_float:
        append_double(out, j.get<double>());
        return;
    default:
        throw NumericalFailure("canonical_dump: unsupported JSON value type");
    }
}

std::pair<int, int> line_and_column(const std::string& text, std::size_t byte) {
    // nlohmann reports a 1-based byte offset of the failure point.
    int line = 1;
    int col = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

} // namespace

std::string canonical_dump(const Json& j) {
    std::string out;
    dump_rec(j, out, 0);
    out += "\n";
    return out;
}

Json parse_text(const std::string& text, const std::string& origin) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        auto [line, col] = line_and_column(text, e.byte);
        std::ostringstream msg;
        msg << origin << ":" << line << ":" << col << ": " << e.what();
        throw InvalidSpec(msg.str());
    }
}

Json parse_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InvalidSpec("cannot read file: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_text(buf.str(), path);
}

std::string digest_hex(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace riccati
