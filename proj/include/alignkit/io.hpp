#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "alignkit/alignment.hpp"
#include "alignkit/ontology.hpp"

namespace alignkit {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::filesystem::path& path);
/// Writes through a temporary sibling and renames it into place. Creates
/// missing parent directories.
void write_file(const std::filesystem::path& path, std::string_view content);

/// Alignment in JSON when the extension is .json, XML otherwise.
Alignment load_alignment(const std::filesystem::path& path);
void save_alignment(const std::filesystem::path& path, const Alignment& a);
std::string serialize_alignment_for(const std::filesystem::path& path, const Alignment& a);

Ontology load_ontology(const std::filesystem::path& path);

}  // namespace alignkit
