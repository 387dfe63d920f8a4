#pragma once

#include <string>
#include <vector>

namespace neseek {

// Subcommand entry points. Exit codes: 0 success, 1 validation failure,
// 2 runtime failure. Every command is a thin composition of module calls;
// no numeric logic lives here.

int cmd_validate(const std::string& doc_path,
                 const std::vector<std::string>& overrides = {});

int cmd_solve_ne(const std::string& doc_path,
                 const std::vector<std::string>& overrides = {},
                 const std::string& out_dir = "");

int cmd_run(const std::string& doc_path,
            const std::vector<std::string>& overrides = {},
            const std::string& out_dir = "", int jobs = 1);

int cmd_sweep(const std::string& doc_path, const std::string& axis,
              const std::vector<std::string>& values,
              const std::vector<std::string>& overrides = {},
              const std::string& out_dir = "", int jobs = 1);

int cmd_compare(const std::string& doc_path,
                const std::vector<std::string>& overrides = {},
                const std::string& out_dir = "", int jobs = 1,
                double threshold = 0.1);

int cli_main(int argc, const char* const* argv);

}  // namespace neseek
