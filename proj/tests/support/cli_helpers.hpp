#pragma once

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "rake/io.hpp"

// RAKE_CLI_PATH is injected by CMake and points at the built `rake` binary.

namespace cli {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

inline std::filesystem::path fresh_dir(const std::string& tag) {
    static int counter = 0;
    const auto dir = std::filesystem::temp_directory_path() /
                     ("rake_" + tag + "_" + std::to_string(::getpid()) + "_" +
                      std::to_string(counter++));
    std::filesystem::create_directories(dir);
    return dir;
}

inline RunResult run_cli(const std::string& args, const std::filesystem::path& cwd) {
    const std::string out_path = (cwd / "_stdout.txt").string();
    const std::string err_path = (cwd / "_stderr.txt").string();
    const std::string cmd = "cd '" + cwd.string() + "' && '" + RAKE_CLI_PATH + "' " + args +
                            " >'" + out_path + "' 2>'" + err_path + "'";
    const int rc = std::system(cmd.c_str());

    RunResult result;
    result.exit_code = rc == -1 ? -1 : (WIFEXITED(rc) ? WEXITSTATUS(rc) : -2);
    auto slurp = [](const std::string& path) {
        try {
            return rake::read_file(path);
        } catch (const rake::Error&) {
            return std::string();
        }
    };
    result.out = slurp(out_path);
    result.err = slurp(err_path);
    return result;
}

inline bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

}  // namespace cli
