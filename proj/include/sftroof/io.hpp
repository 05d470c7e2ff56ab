#pragma once

// SFT definition files and CSV/JSON emission.
//
// An SFT definition is a JSON document (comments allowed):
//
//   { "alphabet_size": 2, "matrix": [[1, 1], [1, 0]] }
//   { "alphabet_size": 2, "forbidden_words": [[1, 1, 1]] }

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "json.hpp"

#include "sftroof/pressure.hpp"
#include "sftroof/suspension.hpp"

namespace sftroof::io {

// Throws Error(kParse) with a "line N" diagnostic.
Sft parse_sft_definition(std::string_view text);
Sft load_sft_file(const std::filesystem::path& path);
nlohmann::json sft_to_json(const Sft& sft);

// 17 significant digits.
std::string format_double(double value);
std::string format_double(long double value);

std::string language_csv(const LanguageTable& table, long double lambda,
                         std::size_t n_max);
std::string components_csv(const std::vector<Component>& components,
                           const std::optional<Recoding>& recoding);
std::string aj_csv(const RoofSpec& spec, std::size_t j_max);
std::string q_csv(const QTable& table);
std::string partition_csv(const std::vector<PartitionTable>& tables);
std::string root_csv(const RootResult& root);

nlohmann::json roof_spec_json(const RoofSpec& spec, const Sft& source);

// Files are written to name.tmp and renamed into place only after every
// write has succeeded.
void write_files_atomic(const std::filesystem::path& dir,
                        const std::map<std::string, std::string>& files);

}  // namespace sftroof::io
