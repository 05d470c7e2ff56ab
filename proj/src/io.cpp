#include "sftroof/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace sftroof::io {

namespace {

std::size_t line_of_offset(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(
                 std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

std::size_t line_of_key(std::string_view text, std::string_view key) {
  const std::string quoted = "\"" + std::string(key) + "\"";
  const auto pos = text.find(quoted);
  return pos == std::string_view::npos ? 1 : line_of_offset(text, pos);
}

// Line of the i-th element of the array that follows key, assuming no
// strings or comments inside the array.
std::size_t line_of_element(std::string_view text, std::string_view key, std::size_t index) {
  const std::string quoted = "\"" + std::string(key) + "\"";
  auto pos = text.find(quoted);
  if (pos == std::string_view::npos) return 1;
  pos = text.find('[', pos);
  if (pos == std::string_view::npos) return line_of_key(text, key);
  int depth = 0;
  std::size_t seen = 0;
  for (std::size_t i = pos; i < text.size(); ++i) {
    const char ch = text[i];
    if (ch == '[' || ch == '{') {
      ++depth;
      if (depth == 2 && seen++ == index) return line_of_offset(text, i);
    } else if (ch == ']' || ch == '}') {
      if (--depth == 0) break;
    } else if (depth == 1 && ch != ',' && !std::isspace(static_cast<unsigned char>(ch))) {
      if (seen++ == index) return line_of_offset(text, i);
      while (i + 1 < text.size() && text[i + 1] != ',' && text[i + 1] != ']') ++i;
    }
  }
  return line_of_key(text, key);
}

[[noreturn]] void fail(std::size_t line, const std::string& message) {
  throw Error(ErrorKind::kParse, "line " + std::to_string(line) + ": " + message);
}

std::size_t as_count(const nlohmann::json& value, std::size_t line, const char* what) {
  if (!value.is_number_integer() || value.get<long long>() < 0) {
    fail(line, std::string(what) + " must be a non-negative integer");
  }
  return value.get<std::size_t>();
}

}  // namespace

Sft parse_sft_definition(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text, nullptr, true, true);
  } catch (const nlohmann::json::parse_error& e) {
    fail(line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1), e.what());
  }
  if (!doc.is_object()) fail(1, "expected a JSON object");
  if (!doc.contains("alphabet_size")) fail(1, "missing field alphabet_size");
  const std::size_t size_line = line_of_key(text, "alphabet_size");
  const std::size_t d = as_count(doc["alphabet_size"], size_line, "alphabet_size");
  if (d == 0) fail(size_line, "alphabet_size must be >= 1");

  const bool has_matrix = doc.contains("matrix");
  const bool has_words = doc.contains("forbidden_words");
  if (has_matrix == has_words) {
    fail(1, "exactly one of matrix or forbidden_words is required");
  }
  if (has_matrix) {
    const std::size_t line = line_of_key(text, "matrix");
    const auto& rows = doc["matrix"];
    if (!rows.is_array() || rows.size() != d) {
      fail(line, "matrix must have alphabet_size rows");
    }
    std::vector<std::vector<int>> entries;
    for (std::size_t i = 0; i < d; ++i) {
      if (!rows[i].is_array() || rows[i].size() != d) {
        fail(line_of_element(text, "matrix", i), "matrix row " + std::to_string(i) + " must have " +
                           std::to_string(d) + " entries");
      }
      std::vector<int> row;
      for (const auto& v : rows[i]) {
        if (!v.is_number_integer() || (v.get<int>() != 0 && v.get<int>() != 1)) {
          fail(line_of_element(text, "matrix", i), "matrix entries must be 0 or 1");
        }
        row.push_back(v.get<int>());
      }
      entries.push_back(std::move(row));
    }
    return Sft::from_matrix(TransitionMatrix::from_rows(entries));
  }

  const std::size_t line = line_of_key(text, "forbidden_words");
  const auto& words = doc["forbidden_words"];
  if (!words.is_array()) fail(line, "forbidden_words must be a list of symbol lists");
  std::vector<Word> forbidden;
  for (std::size_t k = 0; k < words.size(); ++k) {
    const auto& w = words[k];
    const std::size_t line = line_of_element(text, "forbidden_words", k);
    if (!w.is_array() || w.empty()) fail(line, "forbidden words must be nonempty lists");
    Word word;
    for (const auto& s : w) {
      const std::size_t symbol = as_count(s, line, "symbol");
      if (symbol >= d) {
        fail(line, "symbol " + std::to_string(symbol) + " outside alphabet of size " +
                       std::to_string(d));
      }
      word.push_back(static_cast<Symbol>(symbol));
    }
    forbidden.push_back(std::move(word));
  }
  return Sft::from_forbidden_words(Alphabet(d), forbidden);
}

Sft load_sft_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kParse, "cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_sft_definition(buffer.str());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kParse) {
      throw Error(ErrorKind::kParse, path.string() + ":" + e.what());
    }
    throw;
  }
}

nlohmann::json sft_to_json(const Sft& sft) {
  nlohmann::json out{{"alphabet_size", sft.alphabet().size()}};
  if (sft.matrix()) {
    out["matrix"] = sft.matrix()->rows();
  } else {
    out["step"] = sft.step();
    out["forbidden_words"] = sft.forbidden();
  }
  return out;
}

std::string format_double(double value) { return format_double(static_cast<long double>(value)); }

std::string format_double(long double value) {
  std::ostringstream out;
  out << std::setprecision(17) << static_cast<double>(value);
  return out.str();
}

std::string language_csv(const LanguageTable& table, long double lambda,
                         std::size_t n_max) {
  std::ostringstream out;
  out << "n,count,log_count,ratio_to_lambda_n\n";
  const long double log_lambda = std::log(lambda);
  for (std::size_t n = 1; n <= std::min(n_max, table.max_n()); ++n) {
    out << n << ",";
    if (n <= table.exact_max_n()) out << table.count(n).str();
    out << "," << format_double(table.log_count(n)) << ","
        << format_double(std::exp(table.log_count(n) - static_cast<long double>(n) * log_lambda))
        << "\n";
  }
  return out.str();
}

std::string components_csv(const std::vector<Component>& components,
                           const std::optional<Recoding>& recoding) {
  std::ostringstream out;
  out << "component,size,symbols,lambda,entropy\n";
  for (std::size_t k = 0; k < components.size(); ++k) {
    const Component& c = components[k];
    std::string symbols;
    for (std::size_t i = 0; i < c.symbols.size(); ++i) {
      if (i > 0) symbols += " ";
      symbols += recoding ? format_word(recoding->blocks[c.symbols[i]])
                          : std::to_string(c.symbols[i]);
    }
    out << k << "," << c.symbols.size() << "," << symbols << ","
        << format_double(c.lambda) << "," << format_double(c.entropy) << "\n";
  }
  return out.str();
}

std::string aj_csv(const RoofSpec& spec, std::size_t j_max) {
  std::ostringstream out;
  out << "j,block_n,a_j,a_j_minus_h_y\n";
  for (std::size_t j = 1; j <= std::min(j_max, spec.aj().size()); ++j) {
    const double a = spec.aj().value(j);
    out << j << "," << block_of(j) << "," << format_double(a) << ","
        << format_double(a - spec.h_y()) << "\n";
  }
  return out.str();
}

std::string q_csv(const QTable& table) {
  std::ostringstream out;
  out << "r,Q_r,recursion_rhs\n";
  for (const QRow& row : table.rows) {
    out << row.r << "," << format_double(row.q) << "," << format_double(row.recursion_rhs)
        << "\n";
  }
  return out.str();
}

std::string partition_csv(const std::vector<PartitionTable>& tables) {
  std::ostringstream out;
  out << "n,c,log_Zn,P_n,lower_bound,upper_bound\n";
  for (const PartitionTable& table : tables) {
    for (const PartitionRow& row : table.rows) {
      out << row.n << "," << format_double(row.scale) << "," << format_double(row.log_z)
          << "," << format_double(row.pressure) << "," << format_double(row.lower_bound)
          << "," << format_double(row.upper_bound) << "\n";
    }
  }
  return out.str();
}

std::string root_csv(const RootResult& root) {
  std::ostringstream out;
  out << "iteration,c_lo,c_hi\n";
  for (const RootStep& step : root.trace) {
    out << step.iteration << "," << format_double(step.lo) << "," << format_double(step.hi)
        << "\n";
  }
  return out.str();
}

nlohmann::json roof_spec_json(const RoofSpec& spec, const Sft& source) {
  nlohmann::json beta = nlohmann::json::object();
  for (Symbol s : spec.beta().domain()) {
    beta[std::to_string(s)] = *spec.beta().successor[s];
  }
  nlohmann::json out{
      {"sft", sft_to_json(source)},
      {"c", spec.c()},
      {"alpha", spec.alpha()},
      {"block_convention", kBlockConvention},
      {"h_y", spec.h_y()},
      {"lambda", static_cast<double>(spec.spectral().lambda)},
      {"ambient_alphabet", spec.alphabet_size()},
      {"step", spec.recoding() ? spec.recoding()->step : 1},
      {"essentialized_target", spec.target().rows()},
      {"live_symbols", spec.target().size()},
      {"beta", beta},
      {"a_j_table_size", spec.aj().size()},
  };
  std::size_t live = 0;
  for (std::size_t s = 0; s < spec.alphabet_size(); ++s) live += spec.is_live(static_cast<Symbol>(s)) ? 1 : 0;
  out["live_symbols"] = live;
  if (spec.recoding()) {
    nlohmann::json blocks = nlohmann::json::array();
    for (const Word& b : spec.recoding()->blocks) blocks.push_back(b);
    out["blocks"] = blocks;
  }
  return out;
}

void write_files_atomic(const std::filesystem::path& dir,
                        const std::map<std::string, std::string>& files) {
  std::filesystem::create_directories(dir);
  std::vector<std::pair<std::filesystem::path, std::filesystem::path>> staged;
  try {
    for (const auto& [name, content] : files) {
      const std::filesystem::path final_path = dir / name;
      std::filesystem::path tmp = final_path;
      tmp += ".tmp";
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      out << content;
      out.close();
      if (!out) throw Error(ErrorKind::kInvalidArgument, "cannot write " + tmp.string());
      staged.emplace_back(tmp, final_path);
    }
  } catch (...) {
    for (const auto& [tmp, final_path] : staged) std::filesystem::remove(tmp);
    throw;
  }
  for (const auto& [tmp, final_path] : staged) std::filesystem::rename(tmp, final_path);
}

}  // namespace sftroof::io
