#include "torusdet/io.hpp"

#include <cmath>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>
#include <vector>

#include "json.hpp"

namespace torusdet {

namespace {

using json = nlohmann::json;

/// Character iterator that counts the newlines it steps over.
class LineCountingIterator {
 public:
  using iterator_category = std::input_iterator_tag;
  using value_type = char;
  using difference_type = std::ptrdiff_t;
  using pointer = const char*;
  using reference = const char&;

  LineCountingIterator(const char* p, std::size_t* line) : p_(p), line_(line) {}
  reference operator*() const { return *p_; }
  LineCountingIterator& operator++() {
    if (*p_ == '\n') ++*line_;
    ++p_;
    return *this;
  }
  LineCountingIterator operator++(int) {
    LineCountingIterator old = *this;
    ++*this;
    return old;
  }
  friend bool operator==(const LineCountingIterator& a, const LineCountingIterator& b) { return a.p_ == b.p_; }
  friend bool operator!=(const LineCountingIterator& a, const LineCountingIterator& b) { return a.p_ != b.p_; }

 private:
  const char* p_;
  std::size_t* line_;
};

/// A parsed document with the line where each member and array element starts.
struct Document {
  json root;
  std::map<std::string, std::size_t> lines;

  std::size_t line_of(std::string path) const {
    while (true) {
      auto it = lines.find(path);
      if (it != lines.end()) return it->second;
      const auto cut = path.find_last_of("./[");
      if (cut == std::string::npos || path.empty()) return 0;
      path.resize(cut);
    }
  }
};

Document parse_document(std::string_view text) {
  Document doc;
  std::size_t line = 1;
  struct Frame {
    bool array = false;
    int next = 0;
    std::string path;
    std::string key;
  };
  std::vector<Frame> stack;

  auto child_path = [&]() -> std::string {
    if (stack.empty()) return {};
    Frame& top = stack.back();
    if (top.array) return top.path + "[" + std::to_string(top.next++) + "]";
    return top.key;
  };
  auto mark = [&](const std::string& p) { doc.lines.emplace(p, line); };

  json::parser_callback_t cb = [&](int, json::parse_event_t event, json& parsed) {
    switch (event) {
      case json::parse_event_t::object_start:
      case json::parse_event_t::array_start: {
        const std::string p = child_path();
        if (!stack.empty() && stack.back().array) mark(p);
        stack.push_back({event == json::parse_event_t::array_start, 0, p, {}});
        break;
      }
      case json::parse_event_t::key: {
        Frame& top = stack.back();
        top.key = (top.path.empty() ? "" : top.path + ".") + parsed.get<std::string>();
        mark(top.key);
        break;
      }
      case json::parse_event_t::value:
        if (!stack.empty() && stack.back().array) mark(child_path());
        break;
      case json::parse_event_t::object_end:
      case json::parse_event_t::array_end:
        stack.pop_back();
        break;
    }
    return true;
  };

  try {
    doc.root = json::parse(LineCountingIterator(text.data(), &line),
                           LineCountingIterator(text.data() + text.size(), &line), cb);
  } catch (const json::parse_error& e) {
    std::size_t err_line = 1;
    const std::size_t end = std::min<std::size_t>(e.byte, text.size());
    for (std::size_t i = 0; i + 1 < end; ++i) {
      if (text[i] == '\n') ++err_line;
    }
    throw ParseError("line " + std::to_string(err_line) + ": malformed JSON: " + e.what(), err_line);
  }
  if (!doc.root.is_object()) throw ParseError("line 1: document must be a JSON object", 1);
  return doc;
}

/// Cursor into a document that knows its own path for error messages.
class Node {
 public:
  Node(const Document& doc, const json& value, std::string path)
      : doc_(&doc), value_(&value), path_(std::move(path)) {}

  const json& value() const { return *value_; }
  const std::string& path() const { return path_; }

  [[noreturn]] void fail(const std::string& message) const {
    const std::size_t line = doc_->line_of(path_);
    std::string where = line > 0 ? "line " + std::to_string(line) + ": " : std::string();
    throw ParseError(where + (path_.empty() ? "document" : "field '" + path_ + "'") + ": " + message, line,
                     path_);
  }

  bool has(const std::string& key) const { return value_->is_object() && value_->contains(key); }

  Node at(const std::string& key) const {
    if (!value_->is_object()) fail("expected an object");
    auto it = value_->find(key);
    const std::string p = path_.empty() ? key : path_ + "." + key;
    if (it == value_->end()) Node(*doc_, *value_, p).fail("missing required field");
    return Node(*doc_, *it, p);
  }

  std::vector<Node> elements() const {
    if (!value_->is_array()) fail("expected an array");
    std::vector<Node> out;
    for (std::size_t i = 0; i < value_->size(); ++i) {
      out.emplace_back(*doc_, (*value_)[i], path_ + "[" + std::to_string(i) + "]");
    }
    return out;
  }

  double number() const {
    if (!value_->is_number()) fail("expected a number");
    const double v = value_->get<double>();
    if (!std::isfinite(v)) fail("expected a finite number");
    return v;
  }

  int integer() const {
    if (!value_->is_number_integer()) fail("expected an integer");
    const auto v = value_->get<std::int64_t>();
    if (v < -(1LL << 30) || v > (1LL << 30)) fail("integer out of range");
    return static_cast<int>(v);
  }

  std::string string() const {
    if (!value_->is_string()) fail("expected a string");
    return value_->get<std::string>();
  }

  double number_or(const std::string& key, double fallback) const { return has(key) ? at(key).number() : fallback; }

 private:
  const Document* doc_;
  const json* value_;
  std::string path_;
};

int read_dimension(const Node& root) {
  const Node d = root.at("dimension");
  const int n = d.integer();
  if (n < 1 || n > kMaxDimension) {
    throw ValidationError("dimension must be between 1 and " + std::to_string(kMaxDimension) + ", got " +
                          std::to_string(n));
  }
  return n;
}

MultiIndex read_index(const Node& node, int dim) {
  if (node.value().is_number_integer()) {
    if (dim != 1) node.fail("a scalar index needs dimension 1; use an array of " + std::to_string(dim));
    return MultiIndex{node.integer()};
  }
  if (!node.value().is_array()) node.fail("expected an integer index or an array of integers");
  const auto parts = node.elements();
  if (static_cast<int>(parts.size()) != dim) {
    node.fail("index has " + std::to_string(parts.size()) + " coordinates, dimension is " + std::to_string(dim));
  }
  MultiIndex k = MultiIndex::zero(dim);
  for (int i = 0; i < dim; ++i) k[i] = parts[static_cast<std::size_t>(i)].integer();
  return k;
}

Complex read_complex(const Node& node) { return {node.at("re").number(), node.number_or("im", 0.0)}; }

LatticeSequence read_sequence(const Node& list, int dim) {
  LatticeSequence out;
  for (const Node& e : list.elements()) {
    const MultiIndex k = read_index(e.at("index"), dim);
    if (out.contains(k)) e.at("index").fail("index " + k.to_string() + " listed twice");
    out.emplace(k, read_complex(e));
  }
  return out;
}

ToroidalSymbol read_symbol(const Node& node, int dim) {
  if (node.has("dimension") && read_dimension(node) != dim) node.at("dimension").fail("differs from the enclosing symbol");
  const std::string kind = node.at("kind").string();
  std::optional<ToroidalSymbol> s;
  if (kind == "fractional_laplacian") {
    const double nu = node.at("nu").number();
    if (!(nu > 0.0)) throw ValidationError("fractional Laplacian needs nu > 0");
    s = fractional_laplacian_symbol(nu, dim);
  } else if (kind == "multiplier") {
    if (node.has("values")) {
      s = ToroidalSymbol::multiplier_table(dim, read_sequence(node.at("values"), dim));
    } else if (node.has("bracket_power")) {
      s = bracket_power_symbol(dim, node.at("bracket_power").number(), node.number_or("scale", 1.0));
    } else {
      node.fail("multiplier needs 'values' or 'bracket_power'");
    }
  } else if (kind == "multiplication") {
    s = ToroidalSymbol::multiplication(dim, read_sequence(node.at("coefficients"), dim));
  } else if (kind == "table") {
    if (node.has("entries")) {
      std::map<std::pair<MultiIndex, MultiIndex>, Complex> entries;
      for (const Node& e : node.at("entries").elements()) {
        const auto key = std::make_pair(read_index(e.at("l"), dim), read_index(e.at("k"), dim));
        if (entries.contains(key)) e.fail("entry listed twice");
        entries.emplace(key, read_complex(e));
      }
      s = ToroidalSymbol::table(dim, entries);
    } else if (node.has("separable")) {
      const Node sep = node.at("separable");
      s = ToroidalSymbol::separable(dim, read_sequence(sep.at("coefficients"), dim),
                                    sep.at("bracket_power").number(), sep.number_or("scale", 1.0));
    } else {
      node.fail("table needs 'entries' or 'separable'");
    }
  } else if (kind == "sum") {
    std::vector<ToroidalSymbol> terms;
    for (const Node& t : node.at("terms").elements()) terms.push_back(read_symbol(t, dim));
    if (terms.empty()) node.at("terms").fail("sum needs at least one term");
    s = ToroidalSymbol::sum(std::move(terms));
  } else {
    node.at("kind").fail("unknown symbol kind '" + kind +
                         "' (expected fractional_laplacian, multiplier, multiplication, table or sum)");
  }
  if (node.has("decay")) {
    const Node d = node.at("decay");
    const double c = d.at("constant").number();
    if (c < 0.0) d.at("constant").fail("must be nonnegative");
    s->with_decay(d.at("order").number(), c);
  }
  if (node.has("order_m")) s->with_order(node.at("order_m").number());
  return *s;
}

}  // namespace

MatrixInput parse_matrix(std::string_view text) {
  const Document doc = parse_document(text);
  const Node root(doc, doc.root, "");
  const int dim = read_dimension(root);
  std::vector<MatrixEntry> entries;
  for (const Node& e : root.at("entries").elements()) {
    entries.push_back({read_index(e.at("row"), dim), read_index(e.at("col"), dim), read_complex(e)});
  }
  MatrixInput out{SparseL1Matrix(dim, entries), TailModel::exact()};
  if (root.has("tail_bound")) {
    const Node t = root.at("tail_bound");
    const std::string kind = t.at("kind").string();
    if (kind == "none") {
      out.tail = TailModel::exact();
    } else if (kind == "constant") {
      const double c = t.at("constant").number();
      if (c < 0.0) t.at("constant").fail("must be nonnegative");
      out.tail = TailModel::constant(c);
    } else if (kind == "power") {
      const double c = t.at("constant").number();
      const double p = t.at("exponent").number();
      if (c < 0.0) t.at("constant").fail("must be nonnegative");
      if (!(p > 0.0)) t.at("exponent").fail("must be positive");
      out.tail = TailModel::power_law(c, p);
    } else {
      t.at("kind").fail("unknown tail kind '" + kind + "' (expected none, constant or power)");
    }
  }
  return out;
}

ToroidalSymbol parse_symbol(std::string_view text) {
  const Document doc = parse_document(text);
  const Node root(doc, doc.root, "");
  return read_symbol(root, read_dimension(root));
}

HillInput parse_hill(std::string_view text) {
  const Document doc = parse_document(text);
  const Node root(doc, doc.root, "");
  const int dim = read_dimension(root);
  const double nu = root.at("nu").number();
  if (!(nu > dim)) throw ValidationError("nu must exceed dimension");
  LatticeSequence g = root.has("potential") ? read_sequence(root.at("potential"), dim) : LatticeSequence{};
  HillInput out{HillProblem(dim, nu, std::move(g)), std::nullopt};
  if (root.has("scan")) {
    const Node s = root.at("scan");
    ScanGrid grid;
    grid.lambda_min = s.at("lambda_min").number();
    grid.lambda_max = s.at("lambda_max").number();
    grid.steps = s.at("steps").integer();
    if (!(grid.lambda_min < grid.lambda_max)) s.at("lambda_max").fail("must exceed lambda_min");
    if (grid.steps < 1) s.at("steps").fail("must be at least 1");
    out.scan = grid;
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace torusdet
