#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "commands.hpp"

namespace testing_support {

// A scratch directory holding config and data files for CLI runs.
class Workspace {
public:
    explicit Workspace(const std::string& name)
        : root_(std::filesystem::temp_directory_path() / ("regula_" + name + "_" + std::to_string(::getpid()))) {
        std::filesystem::remove_all(root_);
        std::filesystem::create_directories(root_);
    }
    ~Workspace() { std::filesystem::remove_all(root_); }
    Workspace(const Workspace&) = delete;
    Workspace& operator=(const Workspace&) = delete;

    const std::filesystem::path& root() const { return root_; }

    std::filesystem::path write(const std::string& name, const std::string& content) const {
        const auto p = root_ / name;
        std::filesystem::create_directories(p.parent_path());
        std::ofstream(p, std::ios::binary) << content;
        return p;
    }

    std::string read(const std::string& name) const {
        std::ifstream in(root_ / name, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    bool exists(const std::string& name) const { return std::filesystem::exists(root_ / name); }

    struct Result {
        int code;
        std::string out;
        std::string err;
    };

    Result run(const std::string& command, const std::string& config_name, std::vector<std::string> extra = {}) const {
        std::vector<std::string> args{command, "--config", (root_ / config_name).string()};
        args.insert(args.end(), extra.begin(), extra.end());
        std::ostringstream out, err;
        const int code = regula::cli::run(args, out, err);
        return {code, out.str(), err.str()};
    }

private:
    std::filesystem::path root_;
};

}  // namespace testing_support
