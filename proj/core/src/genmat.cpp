#include "uwofdm/genmat.hpp"

#include <cstring>
#include "uwofdm/version.hpp"
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace uwofdm {

cxmat compute_T(const cxmat& a, const CarrierMaps& maps,
                const SystemConfig& cfg) {
  if (a.rows() != maps.b.cols())
    throw std::invalid_argument("compute_T: a must have n - n_z rows");
  if (a.cols() <= cfg.n_u)
    throw std::invalid_argument("compute_T: a needs more than n_u columns");

  const cxmat m = idft_matrix(cfg.n) * maps.b * a;
  const auto parts =
      block_partition(m, cfg.n - cfg.n_u, static_cast<int>(a.cols()) - cfg.n_u);
  Eigen::FullPivLU<cxmat> lu(parts.m22);
  if (!lu.isInvertible())
    throw std::runtime_error(
        "compute_T: tail system is singular, zero word unreachable");
  return -lu.solve(parts.m21);
}

cxmat build_G_d(const cxmat& a_d, const CarrierMaps& maps,
                const SystemConfig& cfg) {
  const int n_dr = cfg.n_d + cfg.n_r;
  if (a_d.rows() != n_dr || a_d.cols() != n_dr)
    throw std::invalid_argument("build_G_d: a_d must be (n_d+n_r) square");

  const cxmat t_d = compute_T(maps.b_p * a_d, maps, cfg);
  cxmat stack(n_dr, cfg.n_d);
  stack.topRows(cfg.n_d) = cxmat::Identity(cfg.n_d, cfg.n_d);
  stack.bottomRows(cfg.n_r) = t_d;
  return maps.b_p * a_d * stack;
}

cxmat build_G_p(const CarrierMaps& maps, const SystemConfig& cfg) {
  const int n_nz = cfg.n - cfg.n_z;
  const cxmat m = idft_matrix(cfg.n) * maps.b * maps.p_p;
  const auto parts = block_partition(m, cfg.n - cfg.n_u, cfg.n_p);
  const cxmat t_p = -pseudo_inverse(parts.m22) * parts.m21;
  cxmat stack(n_nz, cfg.n_p);
  stack.topRows(cfg.n_p) = cxmat::Identity(cfg.n_p, cfg.n_p);
  stack.bottomRows(n_nz - cfg.n_p) = t_p;
  return maps.p_p * stack;
}

double pilot_energy(const cxmat& g_p, const cxvec& p) {
  if (g_p.cols() != p.size())
    throw std::invalid_argument("pilot_energy: size mismatch");
  return (g_p * p).squaredNorm();
}

cxmat scale_G_d(const cxmat& g_d, const SystemConfig& cfg) {
  const double tr = g_d.squaredNorm();  // == trace(G^H G)
  if (tr <= 0.0)
    throw std::invalid_argument("scale_G_d: generator has no energy");
  const double c = std::sqrt(cfg.alpha() * cfg.n_d / tr);
  return c * g_d;
}

namespace {

void put_u64_le(std::ostream& out, std::uint64_t v) {
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(buf), 8);
}

std::uint64_t get_u64_le(std::istream& in) {
  unsigned char buf[8];
  in.read(reinterpret_cast<char*>(buf), 8);
  if (!in) throw std::runtime_error("generator archive: truncated payload");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return v;
}

void put_double_le(std::ostream& out, double d) {
  std::uint64_t bits;
  std::memcpy(&bits, &d, sizeof(bits));
  put_u64_le(out, bits);
}

double get_double_le(std::istream& in) {
  const std::uint64_t bits = get_u64_le(in);
  double d;
  std::memcpy(&d, &bits, sizeof(d));
  return d;
}

void write_matrix_payload(std::ostream& out, const cxmat& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      put_double_le(out, m(r, c).real());
      put_double_le(out, m(r, c).imag());
    }
  }
}

cxmat read_matrix_payload(std::istream& in, Eigen::Index rows,
                          Eigen::Index cols) {
  cxmat m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      const double re = get_double_le(in);
      const double im = get_double_le(in);
      m(r, c) = cxd(re, im);
    }
  }
  return m;
}

}  // namespace

void write_generator_archive(const std::string& path,
                             const GeneratorArchive& archive) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("write_generator_archive: cannot open " + path);

  std::ostringstream header;
  header << kGenmatMagic << "\n";
  header << "cfg_hash " << std::hex << archive.cfg_hash << std::dec << "\n";
  header << "mode " << archive.mode << "\n";
  char alpha_buf[64];
  std::snprintf(alpha_buf, sizeof(alpha_buf), "%.17g", archive.alpha);
  header << "alpha " << alpha_buf << "\n";
  header << "matrix a_d " << archive.a_d.rows() << " " << archive.a_d.cols()
         << "\n";
  header << "matrix g_d " << archive.g_d.rows() << " " << archive.g_d.cols()
         << "\n";
  header << "matrix g_p " << archive.g_p.rows() << " " << archive.g_p.cols()
         << "\n";
  header << "matrix p " << archive.p.size() << " 1\n";
  header << "end\n";
  out << header.str();

  write_matrix_payload(out, archive.a_d);
  write_matrix_payload(out, archive.g_d);
  write_matrix_payload(out, archive.g_p);
  write_matrix_payload(out, archive.p);
  if (!out)
    throw std::runtime_error("write_generator_archive: write failed: " + path);
}

GeneratorArchive read_generator_archive(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("read_generator_archive: cannot open " + path);

  std::string line;
  if (!std::getline(in, line) || line != kGenmatMagic)
    throw std::runtime_error("read_generator_archive: bad magic in " + path);

  GeneratorArchive archive;
  struct Dim {
    std::string name;
    Eigen::Index rows = 0, cols = 0;
  };
  std::vector<Dim> dims;
  while (std::getline(in, line)) {
    if (line == "end") break;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "cfg_hash") {
      ls >> std::hex >> archive.cfg_hash >> std::dec;
    } else if (key == "mode") {
      ls >> archive.mode;
    } else if (key == "alpha") {
      ls >> archive.alpha;
    } else if (key == "matrix") {
      Dim d;
      ls >> d.name >> d.rows >> d.cols;
      dims.push_back(d);
    } else {
      throw std::runtime_error("read_generator_archive: unknown header line '" +
                               line + "'");
    }
    if (ls.fail())
      throw std::runtime_error("read_generator_archive: malformed header '" +
                               line + "'");
  }
  if (line != "end")
    throw std::runtime_error("read_generator_archive: header missing 'end'");

  for (const auto& d : dims) {
    if (d.rows < 0 || d.cols < 0)
      throw std::runtime_error("read_generator_archive: negative dimensions");
    const cxmat m = read_matrix_payload(in, d.rows, d.cols);
    if (d.name == "a_d")
      archive.a_d = m;
    else if (d.name == "g_d")
      archive.g_d = m;
    else if (d.name == "g_p")
      archive.g_p = m;
    else if (d.name == "p") {
      if (d.cols != 1)
        throw std::runtime_error("read_generator_archive: p must be a column");
      archive.p = m.col(0);
    }
    else
      throw std::runtime_error("read_generator_archive: unknown matrix '" +
                               d.name + "'");
  }
  return archive;
}

}  // namespace uwofdm
