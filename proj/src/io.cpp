#include "vbchain/io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "vbchain/errors.hpp"

namespace vbchain {

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw FileNotFound("cannot open " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string current;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(current);
      current.clear();
    } else if (c != '\r') {
      current += c;
    }
  }
  if (!current.empty()) {
    lines.push_back(current);
  }
  return lines;
}

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) {
    tokens.push_back(tok);
  }
  return tokens;
}

double parse_double(const std::string& token, const std::string& path) {
  errno = 0;
  char* end = nullptr;
  const double value = std::strtod(token.c_str(), &end);
  if (end != token.c_str() + token.size() || token.empty() || errno == ERANGE) {
    throw ParseError(path + ": bad numeric token '" + token + "'");
  }
  return value;
}

long parse_count(const std::string& token, const std::string& path) {
  errno = 0;
  char* end = nullptr;
  const long value = std::strtol(token.c_str(), &end, 10);
  if (end != token.c_str() + token.size() || token.empty() ||
      errno == ERANGE || value < 1 || value > 1000000) {
    throw ParseError(path + ": bad state count '" + token + "'");
  }
  return value;
}

// Shared body for VBK1/VBQ1: header, count, optional pi line, n rows, and
// nothing but whitespace afterwards.
struct ParsedTable {
  Eigen::VectorXd pi;  // empty when the format has no pi line
  Eigen::MatrixXd table;
};

ParsedTable parse_table_file(const std::string& path, const char* header,
                             bool with_pi) {
  const std::vector<std::string> lines = split_lines(slurp(path));
  std::size_t cursor = 0;
  auto next_line = [&]() -> const std::string& {
    if (cursor >= lines.size()) {
      throw ParseError(path + ": truncated file");
    }
    return lines[cursor++];
  };

  const std::string head = next_line();
  if (tokenize(head).size() != 1 || tokenize(head)[0] != header) {
    throw ParseError(path + ": expected header " + std::string(header));
  }
  const std::vector<std::string> count_tokens = tokenize(next_line());
  if (count_tokens.size() != 1) {
    throw ParseError(path + ": expected a lone state count");
  }
  const long n = parse_count(count_tokens[0], path);

  ParsedTable out;
  if (with_pi) {
    const std::vector<std::string> pi_tokens = tokenize(next_line());
    if (static_cast<long>(pi_tokens.size()) != n) {
      throw ParseError(path + ": stationary line must hold exactly n values");
    }
    out.pi.resize(n);
    for (long i = 0; i < n; ++i) {
      out.pi[i] = parse_double(pi_tokens[static_cast<std::size_t>(i)], path);
    }
  }
  out.table.resize(n, n);
  for (long i = 0; i < n; ++i) {
    const std::vector<std::string> row = tokenize(next_line());
    if (static_cast<long>(row.size()) != n) {
      throw ParseError(path + ": row " + std::to_string(i + 1) +
                       " must hold exactly n values");
    }
    for (long j = 0; j < n; ++j) {
      out.table(i, j) = parse_double(row[static_cast<std::size_t>(j)], path);
    }
  }
  for (; cursor < lines.size(); ++cursor) {
    if (!tokenize(lines[cursor]).empty()) {
      throw ParseError(path + ": trailing garbage after the table");
    }
  }
  return out;
}

void write_lines(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error("cannot write " + path);
  }
  out << body;
  if (!out) {
    throw Error("write failed for " + path);
  }
}

std::string render_vector(const Eigen::VectorXd& v) {
  std::string line;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i > 0) line += ' ';
    line += format_double(v[i]);
  }
  return line;
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_kernel(const std::string& path, const ReversibleKernel& K) {
  std::string body = "VBK1\n";
  body += std::to_string(K.size());
  body += '\n';
  body += render_vector(K.pi);
  body += '\n';
  for (Eigen::Index i = 0; i < K.size(); ++i) {
    body += render_vector(K.P.row(i).transpose());
    body += '\n';
  }
  write_lines(path, body);
}

ReversibleKernel read_kernel(const std::string& path,
                             const KernelOptions& opts) {
  ParsedTable parsed = parse_table_file(path, "VBK1", true);
  return from_matrix(parsed.table, parsed.pi, opts);
}

void write_proposal(const std::string& path, const ProposalTable& q) {
  std::string body = "VBQ1\n";
  body += std::to_string(q.q.rows());
  body += '\n';
  for (Eigen::Index i = 0; i < q.q.rows(); ++i) {
    body += render_vector(q.q.row(i).transpose());
    body += '\n';
  }
  write_lines(path, body);
}

ProposalTable read_proposal(const std::string& path) {
  ParsedTable parsed = parse_table_file(path, "VBQ1", false);
  const Eigen::Index n = parsed.table.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    double row_sum = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!(parsed.table(i, j) >= 0.0)) {
        throw RowSumExceedsOne(path + ": negative proposal entry");
      }
      row_sum += parsed.table(i, j);
    }
    if (row_sum > 1.0 + 1e-12) {
      throw RowSumExceedsOne(path + ": proposal row sum exceeds 1");
    }
  }
  ProposalTable out;
  out.q = std::move(parsed.table);
  return out;
}

Eigen::VectorXd read_weights(const std::string& path) {
  const std::vector<std::string> tokens = tokenize(slurp(path));
  if (tokens.empty()) {
    throw ParseError(path + ": no values found");
  }
  Eigen::VectorXd v(static_cast<Eigen::Index>(tokens.size()));
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = parse_double(tokens[i], path);
  }
  return v;
}

}  // namespace vbchain
