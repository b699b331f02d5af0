#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "vadtree/errors.hpp"

namespace vadtree {

// ordered_json keeps insertion order, which keeps every artifact we write
// byte-stable across runs.
using json = nlohmann::ordered_json;

inline json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw invalid_input("cannot open " + path.string());
    }
    try {
        return json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw invalid_input(path.string() + ": " + e.what());
    }
}

inline void write_json_file(const std::filesystem::path& path, const json& j) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw invalid_input("cannot write " + path.string());
    }
    out << j.dump(2) << '\n';
}

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw invalid_input("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Sorted *.json listing, so directory iteration order never leaks into output.
inline std::vector<std::filesystem::path> list_json_files(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) {
        throw invalid_input("not a directory: " + dir.string());
    }
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    return files;
}

} // namespace vadtree
