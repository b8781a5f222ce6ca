#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "gasket/fields.hpp"
#include "gasket/graph.hpp"
#include "gasket/spectral.hpp"

namespace gasket::io {

/// Write via temp file + rename so partial files are never observed.
void atomic_write(const std::filesystem::path& path, const std::string& content);

/// Vertex table: index, addr, x_num, x_den, y_num, y_den, boundary.
/// Coordinates are exact dyadic rationals in the triangle-lattice frame
/// (planar point = x*e1 + y*e2 with e1=(1,0), e2=(1/2, sqrt(3)/2)),
/// reduced to lowest terms.
std::string graph_vertex_csv(const GasketGraph& g);

/// Edge table: i, j (vertex indices, i < j).
std::string graph_edge_csv(const GasketGraph& g);

/// Eigenvalue table: level, index, eigenvalue.
std::string spectrum_csv(const SpectralDecomposition& spec);

/// Eigenvector matrix with a header recording level, N_m, and conventions.
std::string eigenvector_csv(const SpectralDecomposition& spec);

/// Field values: vertex index, value; header records (m, s, seed).
std::string field_csv(const FieldSample& field);

/// Plot-ready two-column table.
std::string xy_csv(const std::vector<double>& x, const std::vector<double>& y,
                   const std::string& xname, const std::string& yname);

/// key = value config file; '#' starts a comment.
std::map<std::string, std::string> parse_config(const std::filesystem::path& path);

std::string format_double(double v);

}  // namespace gasket::io
