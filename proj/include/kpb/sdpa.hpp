#pragma once

// Sparse SDPA text format (".dat-s"): export and import of ConicProgram.
//
// The file encodes the pair
//   (P) min c'x  s.t.  X = sum_i x_i F_i - F_0,  X >= 0
//   (D) max <F_0,Y> s.t. <F_i,Y> = c_i,  Y >= 0,
// so a maximize-sense program maps directly onto the D side with F_0 the
// objective, F_i the constraint matrices and c the right-hand sides.
// Minimize-sense programs are stored negated and flagged with a marker
// comment, which the importer honors; export -> import -> export is byte
// identical.  Values are written as shortest round-trip decimals.

#include <kpb/conic.hpp>
#include <kpb/rational.hpp>

#include <algorithm>
#include <charconv>
#include <sstream>
#include <string>
#include <vector>

namespace kpb {

inline constexpr const char* kSdpaMinimizeMarker = "*sense minimize: objective stored negated";

namespace sdpa_detail {

inline std::string format_double(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  require(res.ec == std::errc(), "sdpa: number formatting failed");
  return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& tok, int line_no) {
  double v = 0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
    throw ParseError(line_no, "sdpa: bad number '" + tok + "'");
  return v;
}

}  // namespace sdpa_detail

inline std::string export_sdpa(const ConicProgram& prog) {
  prog.validate();
  const bool minimize = prog.sense == ConicProgram::Sense::Minimize;
  std::string out;
  if (minimize) {
    out += kSdpaMinimizeMarker;
    out += "\n";
  }
  out += std::to_string(prog.constraints.size()) + "\n";
  out += std::to_string(prog.blocks.size()) + "\n";
  for (std::size_t bl = 0; bl < prog.blocks.size(); ++bl) {
    int s = prog.blocks[bl].size;
    out += (bl ? " " : "") +
           std::to_string(prog.blocks[bl].kind == BlockKind::Diagonal ? -s : s);
  }
  out += "\n";
  for (std::size_t i = 0; i < prog.constraints.size(); ++i)
    out += (i ? " " : "") + sdpa_detail::format_double(to_double(prog.constraints[i].rhs));
  out += "\n";

  auto emit = [&](int matno, const std::vector<BlockCoeff>& coeff, bool negate) {
    for (std::size_t bl = 0; bl < coeff.size(); ++bl) {
      std::vector<SymEntry> sorted = coeff[bl];
      std::sort(sorted.begin(), sorted.end(), [](const SymEntry& a, const SymEntry& b) {
        return a.i != b.i ? a.i < b.i : a.j < b.j;
      });
      for (const auto& e : sorted) {
        double v = to_double(negate ? -e.value : e.value);
        if (v == 0) continue;
        out += std::to_string(matno) + " " + std::to_string(bl + 1) + " " +
               std::to_string(e.i + 1) + " " + std::to_string(e.j + 1) + " " +
               sdpa_detail::format_double(v) + "\n";
      }
    }
  };
  emit(0, prog.objective, minimize);
  for (std::size_t i = 0; i < prog.constraints.size(); ++i)
    emit(static_cast<int>(i) + 1, prog.constraints[i].coeff, false);
  return out;
}

inline ConicProgram import_sdpa(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool minimize = false;
  std::vector<std::string> data_lines;
  std::vector<int> data_line_nos;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '*' || line[0] == '"') {
      if (line == kSdpaMinimizeMarker) minimize = true;
      continue;
    }
    data_lines.push_back(line);
    data_line_nos.push_back(line_no);
  }
  require(data_lines.size() >= 4, "sdpa: truncated file");

  auto tokens = [&](std::size_t idx) {
    std::string clean = data_lines[idx];
    for (char& c : clean)
      if (c == ',' || c == '(' || c == ')' || c == '{' || c == '}') c = ' ';
    std::istringstream ls(clean);
    std::vector<std::string> toks;
    std::string t;
    while (ls >> t) toks.push_back(t);
    return toks;
  };

  int m = std::stoi(tokens(0).at(0));
  int nblocks = std::stoi(tokens(1).at(0));
  auto size_toks = tokens(2);
  require(static_cast<int>(size_toks.size()) == nblocks, "sdpa: block size count mismatch");
  ConicProgram prog;
  prog.sense = minimize ? ConicProgram::Sense::Minimize : ConicProgram::Sense::Maximize;
  for (const auto& t : size_toks) {
    int s = std::stoi(t);
    require(s != 0, "sdpa: zero block size");
    prog.blocks.push_back({s < 0 ? BlockKind::Diagonal : BlockKind::Psd, std::abs(s)});
  }
  auto rhs_toks = tokens(3);
  require(static_cast<int>(rhs_toks.size()) == m, "sdpa: rhs count mismatch");
  prog.objective.assign(prog.blocks.size(), {});
  prog.constraints.resize(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    prog.constraints[static_cast<std::size_t>(i)].coeff.assign(prog.blocks.size(), {});
    prog.constraints[static_cast<std::size_t>(i)].rhs =
        exact_rational(sdpa_detail::parse_double(rhs_toks[static_cast<std::size_t>(i)], data_line_nos[3]));
  }

  for (std::size_t li = 4; li < data_lines.size(); ++li) {
    auto toks = tokens(li);
    require(toks.size() == 5, "sdpa: entry line needs 5 fields");
    int matno = std::stoi(toks[0]);
    int blkno = std::stoi(toks[1]) - 1;
    int i = std::stoi(toks[2]) - 1;
    int j = std::stoi(toks[3]) - 1;
    double v = sdpa_detail::parse_double(toks[4], data_line_nos[li]);
    require(matno >= 0 && matno <= m, "sdpa: matrix number out of range");
    require(blkno >= 0 && blkno < nblocks, "sdpa: block number out of range");
    if (i > j) std::swap(i, j);
    Rational value = exact_rational(v);
    if (matno == 0 && minimize) value = -value;
    auto& target = matno == 0 ? prog.objective[static_cast<std::size_t>(blkno)]
                              : prog.constraints[static_cast<std::size_t>(matno) - 1].coeff[static_cast<std::size_t>(blkno)];
    target.push_back({i, j, value});
  }
  prog.validate();
  return prog;
}

}  // namespace kpb
