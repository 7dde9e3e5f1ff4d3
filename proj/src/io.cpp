#include "alignkit/io.hpp"

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include "alignkit/turtle.hpp"

namespace alignkit {

namespace {

bool is_json(const std::filesystem::path& path) { return path.extension() == ".json"; }

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string() + ": " + std::strerror(errno));
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error while reading " + path.string());
  return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string() + ": " + std::strerror(errno));
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("error while writing " + path.string());
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot write " + path.string() + ": " + ec.message());
}

Alignment load_alignment(const std::filesystem::path& path) {
  auto text = read_file(path);
  return is_json(path) ? parse_alignment_json(text) : parse_alignment_xml(text);
}

std::string serialize_alignment_for(const std::filesystem::path& path, const Alignment& a) {
  return is_json(path) ? serialize_alignment_json(a) : serialize_alignment_xml(a);
}

void save_alignment(const std::filesystem::path& path, const Alignment& a) {
  write_file(path, serialize_alignment_for(path, a));
}

Ontology load_ontology(const std::filesystem::path& path) { return parse_turtle(read_file(path)); }

}  // namespace alignkit
