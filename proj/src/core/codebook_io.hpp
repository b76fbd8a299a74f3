#pragma once

#include <string>

#include "core/codebook.hpp"

namespace lpscma {

// Codebook interchange format. Complex entries are [re, im] pairs, codewords
// are column-major per user, labels are log2(M)-bit strings ordered by
// codeword index. Files written here re-serialize byte-identically after a
// parse round-trip.
std::string serialize_codebook(const CodebookSet& cbs);
CodebookSet deserialize_codebook(const std::string& json_text);

CodebookSet load_codebook_file(const std::string& path);
void save_codebook_file(const CodebookSet& cbs, const std::string& path);

}  // namespace lpscma
