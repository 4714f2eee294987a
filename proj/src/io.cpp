#include "ufem/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace ufem {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n"), b = s.find_last_not_of(" \t\r\n");
  return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

std::string num(double x) {
  std::ostringstream o;
  o << std::setprecision(10) << x;
  return o.str();
}

}  // namespace

std::map<std::string, std::string> parse_config(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorKind::BadInput, "config line " + std::to_string(lineno) + ": expected key = value");
    std::string k = trim(line.substr(0, eq)), v = trim(line.substr(eq + 1));
    if (k.empty()) throw Error(ErrorKind::BadInput, "config line " + std::to_string(lineno) + ": empty key");
    kv[k] = v;
  }
  return kv;
}

std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::BadInput, "cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

const char* history_header() {
  return "iter,n_leaves,n_elements,n_dofs,eta,xi_residual,xi_jump,xi_penalty,xi_tangential,osc,err_dg,eff";
}

std::string history_line(const HistoryRow& r) {
  std::ostringstream o;
  o << std::setprecision(10) << r.iter << ',' << r.n_leaves << ',' << r.n_elements << ',' << r.n_dofs << ','
    << r.eta << ',' << r.xi_residual << ',' << r.xi_jump << ',' << r.xi_penalty << ',' << r.xi_tangential << ','
    << r.osc << ',';
  if (r.err_dg) o << *r.err_dg;
  o << ',';
  if (r.eff) o << *r.eff;
  return o.str();
}

void write_history(const std::string& path, const std::vector<HistoryRow>& rows) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::BadInput, "cannot write " + path);
  out << history_header() << '\n';
  for (const auto& r : rows) out << history_line(r) << '\n';
}

std::vector<HistoryPoint> read_history(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::BadInput, "cannot read " + path);
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::BadInput, path + " is empty");
  std::vector<std::string> cols;
  {
    std::istringstream h(trim(line));
    std::string c;
    while (std::getline(h, c, ',')) cols.push_back(trim(c));
  }
  auto col = [&](const std::string& name) {
    for (size_t k = 0; k < cols.size(); ++k)
      if (cols[k] == name) return static_cast<int>(k);
    throw Error(ErrorKind::BadInput, path + " lacks column " + name);
  };
  int cn = col("n_dofs"), ce = col("eta"), cd = -1;
  for (size_t k = 0; k < cols.size(); ++k)
    if (cols[k] == "err_dg") cd = static_cast<int>(k);
  std::vector<HistoryPoint> out;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::istringstream ls(line);
    std::string c;
    while (std::getline(ls, c, ',')) f.push_back(trim(c));
    while (f.size() < cols.size()) f.push_back("");
    HistoryPoint p;
    try {
      p.n_dofs = std::stod(f[cn]);
      p.eta = std::stod(f[ce]);
      if (cd >= 0 && !f[cd].empty()) p.err_dg = std::stod(f[cd]);
    } catch (const std::exception&) {
      throw Error(ErrorKind::BadInput, path + ": malformed row '" + line + "'");
    }
    out.push_back(p);
  }
  return out;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 3) throw Error(ErrorKind::BadInput, "slope fit needs at least 3 points");
  double n = static_cast<double>(x.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t k = 0; k < x.size(); ++k) {
    if (!(x[k] > 0 && y[k] > 0)) throw Error(ErrorKind::BadInput, "slope fit needs positive values");
    double lx = std::log(x[k]), ly = std::log(y[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  double den = n * sxx - sx * sx;
  if (std::abs(den) < 1e-300) throw Error(ErrorKind::BadInput, "slope fit has identical abscissae");
  return (n * sxy - sx * sy) / den;
}

void write_mesh_dump(const std::string& path, const InducedMesh& im, const QuadMesh& leaves) {
  (void)leaves;
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::BadInput, "cannot write " + path);
  out << "# id level x0 y0 x1 y1 class eta large1 large2 members...\n";
  out << std::setprecision(12);
  for (size_t e = 0; e < im.elements.size(); ++e) {
    const auto& el = im.elements[e];
    const char* cls = el.is_cut() ? "cut" : (el.has(1) ? "in1" : "in2");
    out << e << ' ' << el.level << ' ' << el.rect.x0 << ' ' << el.rect.y0 << ' ' << el.rect.x1 << ' ' << el.rect.y1
        << ' ' << cls << ' ' << el.dev.eta << ' ' << el.large1 << ' ' << el.large2;
    for (int m : el.members) out << ' ' << m;
    out << '\n';
  }
}

std::string mesh_svg(const InducedMesh& im, const InterfaceCurve& curve, const Rect& domain) {
  const double W = 800, s = W / std::max(domain.width(), domain.height());
  auto X = [&](double x) { return num((x - domain.x0) * s); };
  auto Y = [&](double y) { return num((domain.y1 - y) * s); };
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(domain.width() * s) << "\" height=\""
    << num(domain.height() * s) << "\">\n";
  for (const auto& el : im.elements) {
    const char* fill = el.members.size() > 1 ? "#f4c27a" : (el.is_cut() ? "#dde8f5" : "none");
    o << "<rect x=\"" << X(el.rect.x0) << "\" y=\"" << Y(el.rect.y1) << "\" width=\"" << num(el.rect.width() * s)
      << "\" height=\"" << num(el.rect.height() * s) << "\" fill=\"" << fill
      << "\" stroke=\"black\" stroke-width=\"0.4\"/>\n";
  }
  for (const auto& line : curve.polylines(400)) {
    o << "<polyline fill=\"none\" stroke=\"#c0392b\" stroke-width=\"1.2\" points=\"";
    for (const auto& p : line) o << X(p.x()) << ',' << Y(p.y()) << ' ';
    o << "\"/>\n";
  }
  o << "</svg>\n";
  return o.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::BadInput, "cannot write " + path);
  out << text;
}

}  // namespace ufem
