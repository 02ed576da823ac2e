#pragma once

#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace xmodal {

// One JSON object per line, UTF-8. Writers emit keys in insertion order
// (ordered_json) so committed golden files are byte-stable.
using ojson = nlohmann::ordered_json;

std::vector<ojson> read_jsonl(const std::string& path);
void write_jsonl(const std::string& path, const std::vector<ojson>& records);
std::string jsonl_to_string(const std::vector<ojson>& records);

}  // namespace xmodal
