#include "dtomo/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace dtomo {

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  // A trailing newline produces one empty tail entry; drop trailing blanks.
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) tokens.push_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

long long parse_int(std::string_view token, int line, const std::string& what) {
  long long value = 0;
  const char* const last = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), last, value);
  if (ec != std::errc{} || ptr != last) {
    throw ParseError(line, "expected integer for " + what + ", got '" + std::string(token) +
                               "'");
  }
  return value;
}

std::uint64_t parse_seed(std::string_view token, int line) {
  std::uint64_t value = 0;
  const char* const last = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), last, value);
  if (ec != std::errc{} || ptr != last) {
    throw ParseError(line, "expected unsigned integer seed, got '" + std::string(token) + "'");
  }
  return value;
}

}  // namespace

TomographyInstance parse_instance(std::string_view text) {
  const auto lines = split_lines(text);
  std::size_t cursor = 0;
  const auto next_line = [&](const std::string& what) -> std::string_view {
    if (cursor >= lines.size()) {
      throw ParseError(static_cast<int>(lines.size()) + 1, "unexpected end of file, expected " + what);
    }
    return lines[cursor++];
  };

  {
    const auto header = tokenize(next_line("'DTOMO 1' header"));
    if (header.size() != 2 || header[0] != "DTOMO" || header[1] != "1") {
      throw ParseError(1, "expected header 'DTOMO 1'");
    }
  }

  const auto nodes_line = tokenize(next_line("'nodes <N>'"));
  if (nodes_line.size() != 2 || nodes_line[0] != "nodes") {
    throw ParseError(static_cast<int>(cursor), "expected 'nodes <N>'");
  }
  const long long node_count = parse_int(nodes_line[1], static_cast<int>(cursor), "node count");
  if (node_count < 1) throw ParseError(static_cast<int>(cursor), "node count must be positive");

  const auto rays_line = tokenize(next_line("'rays <R>'"));
  if (rays_line.size() != 2 || rays_line[0] != "rays") {
    throw ParseError(static_cast<int>(cursor), "expected 'rays <R>'");
  }
  const long long ray_count = parse_int(rays_line[1], static_cast<int>(cursor), "ray count");
  if (ray_count < 1) throw ParseError(static_cast<int>(cursor), "ray count must be positive");

  RaySystem rays;
  rays.node_count = static_cast<int>(node_count);
  rays.rays.resize(ray_count);
  std::vector<int> projections(ray_count, 0);
  std::vector<int> ray_line(ray_count, 0);
  std::vector<bool> seen(ray_count, false);

  for (long long k = 0; k < ray_count; ++k) {
    const int line_no = static_cast<int>(cursor) + 1;
    const auto tokens = tokenize(next_line("a ray line"));
    if (tokens.size() < 6 || tokens[0] != "ray" || tokens[2] != ":") {
      throw ParseError(line_no, "expected 'ray <id> : <nodes> = <P>'");
    }
    const long long id = parse_int(tokens[1], line_no, "ray id");
    if (id < 0 || id >= ray_count) {
      throw ParseError(line_no, "ray id " + std::to_string(id) + " outside [0, " +
                                    std::to_string(ray_count) + ")");
    }
    if (seen[id]) throw ParseError(line_no, "duplicate ray id " + std::to_string(id));
    seen[id] = true;
    ray_line[id] = line_no;

    std::size_t eq = 3;
    while (eq < tokens.size() && tokens[eq] != "=") ++eq;
    if (eq >= tokens.size() - 1 || eq == 3) {
      throw ParseError(line_no, "expected '= <P>' after node indices");
    }
    if (eq + 2 != tokens.size()) throw ParseError(line_no, "trailing tokens after P");

    std::vector<int>& members = rays.rays[id];
    for (std::size_t t = 3; t < eq; ++t) {
      const long long node = parse_int(tokens[t], line_no, "node index");
      if (node < 0 || node >= node_count) {
        throw ParseError(line_no, "node index " + std::to_string(node) + " outside [0, " +
                                      std::to_string(node_count) + ")");
      }
      members.push_back(static_cast<int>(node));
    }
    const long long p = parse_int(tokens[eq + 1], line_no, "projection");
    if (p < 0) throw ParseError(line_no, "projection must be nonnegative");
    projections[id] = static_cast<int>(p);
  }

  std::uint64_t seed = 0;
  if (cursor < lines.size()) {
    const int line_no = static_cast<int>(cursor) + 1;
    const auto tokens = tokenize(lines[cursor]);
    if (tokens.size() == 2 && tokens[0] == "seed") {
      seed = parse_seed(tokens[1], line_no);
      ++cursor;
    }
  }
  if (cursor < lines.size()) {
    throw ParseError(static_cast<int>(cursor) + 1, "unexpected trailing content");
  }

  if (auto violation = validate_ray_system(rays)) {
    const int line_no = violation->ray_b >= 0 ? ray_line[std::max(violation->ray_a, violation->ray_b)]
                                              : ray_line[violation->ray_a];
    throw ParseError(line_no, violation->message);
  }
  return make_instance(std::move(rays), std::move(projections), seed);
}

std::string serialize_instance(const TomographyInstance& instance) {
  std::ostringstream out;
  out << "DTOMO 1\n";
  out << "nodes " << instance.node_count() << "\n";
  out << "rays " << instance.ray_count() << "\n";
  for (int r = 0; r < instance.ray_count(); ++r) {
    out << "ray " << r << " :";
    for (int node : instance.rays.rays[r]) out << ' ' << node;
    out << " = " << instance.projections[r] << "\n";
  }
  out << "seed " << instance.lambda_seed << "\n";
  return out.str();
}

BinaryImage parse_image(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw ParseError(1, "expected 'DIMG' header");
  const auto header = tokenize(lines[0]);
  if (header.size() < 2 || header.size() > 4 || header[0] != "DIMG") {
    throw ParseError(1, "expected header 'DIMG <d1> [<d2> [<d3>]]'");
  }
  std::vector<int> dims;
  for (std::size_t i = 1; i < header.size(); ++i) {
    const long long d = parse_int(header[i], 1, "dimension");
    if (d < 1) throw ParseError(1, "dimensions must be positive");
    dims.push_back(static_cast<int>(d));
  }

  const int layers = dims.size() == 3 ? dims[0] : 1;
  const int rows = dims.size() == 3 ? dims[1] : (dims.size() == 2 ? dims[0] : 1);
  const int cols = dims.back();

  std::vector<std::uint8_t> values;
  values.reserve(static_cast<std::size_t>(layers) * rows * cols);
  std::size_t cursor = 1;
  for (int layer = 0; layer < layers; ++layer) {
    if (layer > 0) {
      if (cursor >= lines.size() || !tokenize(lines[cursor]).empty()) {
        throw ParseError(static_cast<int>(cursor) + 1, "expected blank line between layers");
      }
      ++cursor;
    }
    for (int row = 0; row < rows; ++row) {
      const int line_no = static_cast<int>(cursor) + 1;
      if (cursor >= lines.size()) throw ParseError(line_no, "missing image row");
      std::string_view line = lines[cursor++];
      while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) {
        line.remove_suffix(1);
      }
      if (static_cast<int>(line.size()) != cols) {
        throw ParseError(line_no, "expected " + std::to_string(cols) + " characters, got " +
                                      std::to_string(line.size()));
      }
      for (char c : line) {
        if (c != '0' && c != '1') {
          throw ParseError(line_no, std::string("invalid pixel character '") + c + "'");
        }
        values.push_back(c == '1' ? 1 : 0);
      }
    }
  }
  if (cursor < lines.size()) {
    throw ParseError(static_cast<int>(cursor) + 1, "unexpected trailing content");
  }
  return BinaryImage::make(std::move(dims), std::move(values));
}

std::string serialize_image(const BinaryImage& image) {
  std::ostringstream out;
  out << "DIMG";
  for (int d : image.dims) out << ' ' << d;
  out << "\n";
  const int layers = image.dims.size() == 3 ? image.dims[0] : 1;
  const int rows = image.dims.size() == 3 ? image.dims[1]
                                          : (image.dims.size() == 2 ? image.dims[0] : 1);
  const int cols = image.dims.back();
  std::size_t idx = 0;
  for (int layer = 0; layer < layers; ++layer) {
    if (layer > 0) out << "\n";
    for (int row = 0; row < rows; ++row) {
      for (int c = 0; c < cols; ++c) out << (image.values[idx++] ? '1' : '0');
      out << "\n";
    }
  }
  return out.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace dtomo
