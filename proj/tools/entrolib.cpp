// entrolib <command> <file.toml> [--n N] [--json PATH] [--csv PATH] [--budget-N K] [--budget-terms T]

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "entrolib/report.hpp"

namespace {

bool write_to(const std::string &path, const std::string &text)
{
    if (path == "-") {
        std::cout << text;
        return true;
    }
    std::ofstream out(path, std::ios::binary);
    out << text;
    return static_cast<bool>(out);
}

// One line per interesting fact; the JSON report is the complete record.
void summarize(const entrolib::Json &rep)
{
    std::cout << rep["command"].get<std::string>() << " " << rep["input"]["file"].get<std::string>() << ": "
              << rep["status"].get<std::string>() << "\n";
    if (rep.contains("error")) {
        std::cout << "  " << rep["error"]["kind"].get<std::string>() << ": " << rep["error"]["message"].get<std::string>()
                  << "\n";
    }
    const auto &r = rep["result"];
    auto show = [&](const char *key) {
        if (r.contains(key)) {
            std::cout << "  " << key << " = " << r[key].dump() << "\n";
        }
    };
    for (const char *key : {"local", "well_defined", "finite_length", "lambda_1", "edim", "contracting", "dim",
                            "degree", "multiplicity", "max_upper_bound", "diff_gap", "sandwich_ok", "passed"}) {
        show(key);
    }
    if (r.contains("lambda") && r["lambda"].is_array()) {
        std::cout << "  lambda =";
        for (const auto &e : r["lambda"]) {
            std::cout << " " << (e.is_object() ? e["value"].dump() : e.dump());
        }
        std::cout << "\n";
    }
    if (r.contains("entropy")) {
        std::cout << "  entropy upper_bound = " << r["entropy"]["upper_bound"].dump()
                  << ", diff_estimate = " << r["entropy"]["diff_estimate"].dump() << "\n";
    }
    if (r.contains("hk")) {
        std::cout << "  hk geometric = " << r["hk"]["geometric"].dump() << ", limit = " << r["hk"]["limit"].dump()
                  << "\n";
    }
    if (r.contains("properties")) {
        for (const auto &p : r["properties"]) {
            std::cout << "  " << p["status"].get<std::string>() << " " << p["name"].get<std::string>();
            if (!p["witness"].is_null()) {
                std::cout << " witness " << p["witness"].get<std::string>();
            }
            std::cout << "\n";
        }
    }
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Length sequences and algebraic entropy of local ring endomorphisms"};
    std::string command, file, json_path, csv_path;
    entrolib::CommandOptions opts;
    std::uint64_t n = 0, budget_N = 0, budget_terms = 0;
    app.add_option("command", command, "check|lambda|entropy|bounds|hk|components|degree|multiplicity|verify")
        ->required()
        ->check(CLI::IsMember(entrolib::command_names()));
    app.add_option("file", file, "problem file (TOML)")->required();
    auto *n_opt = app.add_option("--n", n, "prefix length n_max")->check(CLI::PositiveNumber);
    app.add_option("--json", json_path, "write the JSON report here ('-' for stdout)");
    app.add_option("--csv", csv_path, "write n,lambda,h_n,running_min here ('-' for stdout)");
    auto *bn_opt = app.add_option("--budget-N", budget_N, "truncation degree budget")->check(CLI::PositiveNumber);
    auto *bt_opt = app.add_option("--budget-terms", budget_terms, "term budget per polynomial")
                       ->check(CLI::PositiveNumber);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e) == 0 ? entrolib::exit_ok : entrolib::exit_usage;
    }

    opts.command = command;
    opts.file_label = std::filesystem::path(file).filename().string();
    if (*n_opt) {
        opts.n = n;
    }
    if (*bn_opt) {
        opts.budget_N = budget_N;
    }
    if (*bt_opt) {
        opts.budget_terms = budget_terms;
    }

    std::string source;
    try {
        source = entrolib::read_file(file);
    } catch (const entrolib::Error &e) {
        std::cerr << e.what() << "\n";
        return entrolib::exit_usage;
    }
    const auto res = entrolib::run_command(opts, source);
    const std::string json = res.report.dump(2) + "\n";
    if (json_path != "-" && csv_path != "-") {
        summarize(res.report);
    }
    if (!json_path.empty() && !write_to(json_path, json)) {
        std::cerr << "cannot write " << json_path << "\n";
        return entrolib::exit_usage;
    }
    if (!csv_path.empty() && !write_to(csv_path, res.csv)) {
        std::cerr << "cannot write " << csv_path << "\n";
        return entrolib::exit_usage;
    }
    return res.exit_code;
}
