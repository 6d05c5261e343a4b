#include <regrid/errors.hpp>
#include <regrid/io.hpp>

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace regrid {

using nlohmann::json;

namespace {

template <class V>
V field(const json& j, const char* key) {
    if (!j.contains(key)) throw parse_error(std::string("layout: missing field '") + key + "'");
    try {
        return j.at(key).get<V>();
    } catch (const json::exception&) {
        throw parse_error(std::string("layout: field '") + key + "' has the wrong type");
    }
}

ordering parse_ordering(const std::string& s) {
    if (s == "row-major" || s == "row_major" || s == "R") return ordering::row_major;
    if (s == "col-major" || s == "col_major" || s == "C") return ordering::col_major;
    throw parse_error("unknown process order '" + s + "'");
}

layout parse_block_cyclic(const json& bc, int elem_size) {
    block_cyclic_spec spec;
    spec.m = field<index_t>(bc, "m");
    spec.n = field<index_t>(bc, "n");
    spec.mb = field<index_t>(bc, "mb");
    spec.nb = field<index_t>(bc, "nb");
    spec.p_rows = field<int>(bc, "p_rows");
    spec.p_cols = field<int>(bc, "p_cols");
    spec.proc_order = bc.contains("proc_order") ? parse_ordering(field<std::string>(bc, "proc_order"))
                                                : ordering::row_major;
    spec.elem_size = bc.contains("elem_size") ? field<int>(bc, "elem_size") : elem_size;
    return make_block_cyclic(spec);
}

} // namespace

layout parse_layout(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw parse_error(std::string("layout: ") + e.what());
    }
    if (!j.is_object()) throw parse_error("layout: expected a JSON object");
    const int elem_size = j.contains("elem_size") ? field<int>(j, "elem_size") : 8;
    if (j.contains("block_cyclic")) return parse_block_cyclic(j.at("block_cyclic"), elem_size);

    regrid::grid g(field<std::vector<index_t>>(j, "row_splits"),
                   field<std::vector<index_t>>(j, "col_splits"));
    if (j.contains("rows") && field<index_t>(j, "rows") != g.rows())
        throw parse_error("layout: rows disagrees with row_splits");
    if (j.contains("cols") && field<index_t>(j, "cols") != g.cols())
        throw parse_error("layout: cols disagrees with col_splits");
    const auto owner_rows = field<std::vector<std::vector<int>>>(j, "owners");
    if (static_cast<int>(owner_rows.size()) != g.n_block_rows())
        throw parse_error("layout: owners needs one row per block row");
    std::vector<int> owners;
    owners.reserve(std::size_t(g.n_blocks()));
    for (const auto& row : owner_rows) {
        if (static_cast<int>(row.size()) != g.n_block_cols())
            throw parse_error("layout: owners needs one entry per block column");
        owners.insert(owners.end(), row.begin(), row.end());
    }
    return layout(std::move(g), field<int>(j, "n_procs"), std::move(owners), elem_size);
}

layout load_layout(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open layout file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_layout(ss.str());
}

std::string layout_to_json(const layout& l) {
    json j;
    j["rows"] = l.rows();
    j["cols"] = l.cols();
    j["row_splits"] = l.grid().row_splits();
    j["col_splits"] = l.grid().col_splits();
    j["n_procs"] = l.n_procs();
    json owners = json::array();
    for (int i = 0; i < l.grid().n_block_rows(); ++i) {
        json row = json::array();
        for (int jj = 0; jj < l.grid().n_block_cols(); ++jj) row.push_back(l.owner(i, jj));
        owners.push_back(std::move(row));
    }
    j["owners"] = std::move(owners);
    j["elem_size"] = l.elem_size();
    return j.dump();
}

std::string_view to_string(element_type t) {
    switch (t) {
    case element_type::i64: return "i64";
    case element_type::f64: return "f64";
    case element_type::c128: return "c128";
    }
    return "?";
}

element_type parse_element_type(std::string_view name) {
    if (name == "i64") return element_type::i64;
    if (name == "f64") return element_type::f64;
    if (name == "c128") return element_type::c128;
    throw parse_error("unknown element type '" + std::string(name) + "'");
}

int element_size(element_type t) {
    return t == element_type::c128 ? 16 : 8;
}

namespace {

constexpr const char* matrix_magic = "REGRID-MATRIX";

matrix_header read_header(std::istream& in, const std::string& path) {
    std::string line;
    if (!std::getline(in, line)) throw parse_error("empty matrix file " + path);
    std::istringstream hs(line);
    std::string magic, type;
    matrix_header h;
    if (!(hs >> magic >> h.rows >> h.cols >> type) || magic != matrix_magic)
        throw parse_error("bad matrix header in " + path);
    if (h.rows <= 0 || h.cols <= 0) throw parse_error("matrix dimensions must be positive in " + path);
    h.type = parse_element_type(type);
    return h;
}

} // namespace

matrix_header read_matrix_header(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw parse_error("cannot open matrix file " + path);
    return read_header(in, path);
}

template <class T>
void save_matrix(const std::string& path, const dense_matrix<T>& m) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw parse_error("cannot write matrix file " + path);
    out << matrix_magic << ' ' << m.rows() << ' ' << m.cols() << ' '
        << to_string(element_type_of<T>()) << '\n';
    out.write(reinterpret_cast<const char*>(m.data().data()),
              static_cast<std::streamsize>(m.data().size() * sizeof(T)));
    if (!out) throw parse_error("failed writing matrix file " + path);
}

template <class T>
dense_matrix<T> load_matrix(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw parse_error("cannot open matrix file " + path);
    const auto h = read_header(in, path);
    if (h.type != element_type_of<T>())
        throw parse_error("matrix file " + path + " holds " + std::string(to_string(h.type)) +
                          ", expected " + std::string(to_string(element_type_of<T>())));
    dense_matrix<T> m(h.rows, h.cols);
    in.read(reinterpret_cast<char*>(m.data().data()),
            static_cast<std::streamsize>(m.data().size() * sizeof(T)));
    if (in.gcount() != static_cast<std::streamsize>(m.data().size() * sizeof(T)))
        throw parse_error("truncated matrix file " + path);
    return m;
}

template void save_matrix(const std::string&, const dense_matrix<std::int64_t>&);
template void save_matrix(const std::string&, const dense_matrix<double>&);
template void save_matrix(const std::string&, const dense_matrix<std::complex<double>>&);
template dense_matrix<std::int64_t> load_matrix(const std::string&);
template dense_matrix<double> load_matrix(const std::string&);
template dense_matrix<std::complex<double>> load_matrix(const std::string&);

} // namespace regrid
