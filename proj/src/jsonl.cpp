#include "xmodal/jsonl.hpp"

#include <fstream>
#include <stdexcept>

namespace xmodal {

std::vector<ojson> read_jsonl(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("jsonl: cannot open '" + path + "'");
  std::vector<ojson> records;
  std::string line;
  size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      records.push_back(ojson::parse(line));
    } catch (const nlohmann::json::parse_error& e) {
      throw std::runtime_error("jsonl: " + path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return records;
}

std::string jsonl_to_string(const std::vector<ojson>& records) {
  std::string out;
  for (const ojson& r : records) {
    out += r.dump();
    out += '\n';
  }
  return out;
}

void write_jsonl(const std::string& path, const std::vector<ojson>& records) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("jsonl: cannot open '" + path + "' for writing");
  os << jsonl_to_string(records);
  if (!os) throw std::runtime_error("jsonl: write failed for '" + path + "'");
}

}  // namespace xmodal
