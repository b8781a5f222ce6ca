#include "gasket/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gasket::io {

namespace {

void reduce_dyadic(std::int64_t num, int exp, std::int64_t& out_num, std::int64_t& out_den) {
    while (exp > 0 && num % 2 == 0) {
        num /= 2;
        --exp;
    }
    out_num = num;
    out_den = std::int64_t{1} << exp;
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::string graph_vertex_csv(const GasketGraph& g) {
    std::ostringstream out;
    out << "index,addr,x_num,x_den,y_num,y_den,boundary\n";
    for (int i = 0; i < g.vertex_count(); ++i) {
        std::int64_t xn, xd, yn, yd;
        reduce_dyadic(g.x[static_cast<std::size_t>(i)], g.level, xn, xd);
        reduce_dyadic(g.y[static_cast<std::size_t>(i)], g.level, yn, yd);
        out << i << ',' << g.addr[static_cast<std::size_t>(i)] << ',' << xn << ',' << xd << ','
            << yn << ',' << yd << ',' << (g.boundary[static_cast<std::size_t>(i)] ? 1 : 0) << '\n';
    }
    return out.str();
}

std::string graph_edge_csv(const GasketGraph& g) {
    std::ostringstream out;
    out << "i,j\n";
    for (const auto& [i, j] : g.edges) out << i << ',' << j << '\n';
    return out.str();
}

std::string spectrum_csv(const SpectralDecomposition& spec) {
    std::ostringstream out;
    out << "level,index,eigenvalue\n";
    for (int i = 0; i < spec.size(); ++i)
        out << spec.level << ',' << (i + 1) << ',' << format_double(spec.eigenvalues[i]) << '\n';
    return out.str();
}

std::string eigenvector_csv(const SpectralDecomposition& spec) {
    std::ostringstream out;
    out << "# level=" << spec.level << " N=" << spec.size()
        << " normalization=L2(mu_m) sign=first-nonzero-positive\n";
    out << "vertex";
    for (int i = 0; i < spec.size(); ++i) out << ",phi" << (i + 1);
    out << '\n';
    for (int k = 0; k < spec.size(); ++k) {
        out << spec.interior[static_cast<std::size_t>(k)];
        for (int i = 0; i < spec.size(); ++i) out << ',' << format_double(spec.modes(k, i));
        out << '\n';
    }
    return out.str();
}

std::string field_csv(const FieldSample& field) {
    std::ostringstream out;
    out << "# m=" << field.level << " s=" << format_double(field.s) << " seed=" << field.seed
        << '\n';
    out << "index,value\n";
    for (int p = 0; p < field.values.size(); ++p)
        out << p << ',' << format_double(field.values[p]) << '\n';
    return out.str();
}

std::string xy_csv(const std::vector<double>& x, const std::vector<double>& y,
                   const std::string& xname, const std::string& yname) {
    if (x.size() != y.size()) throw std::invalid_argument("xy_csv: length mismatch");
    std::ostringstream out;
    out << xname << ',' << yname << '\n';
    for (std::size_t i = 0; i < x.size(); ++i)
        out << format_double(x[i]) << ',' << format_double(y[i]) << '\n';
    return out.str();
}

std::map<std::string, std::string> parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path.string());
    std::map<std::string, std::string> cfg;
    std::string line;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line missing '=': " + line);
        cfg[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return cfg;
}

}  // namespace gasket::io
