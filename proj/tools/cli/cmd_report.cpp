#include <fstream>
#include <iostream>
#include <memory>

#include "common.hpp"
#include "json.hpp"
#include "usertype/report.hpp"

namespace usertype::cli {

namespace {

struct ReportOptions {
    std::string users_path;
    std::string predictions_path;
    std::string labels_path;
    std::string json_path;
};

/// Predictions are the classify output: one JSON object per line with
/// user_id and label. The first prediction for a user wins.
std::unordered_map<std::string, UserType> load_predictions(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");
    std::unordered_map<std::string, UserType> labels;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
        if (obj.is_discarded() || !obj.is_object() || !obj.contains("user_id") ||
            !obj.contains("label"))
            throw DataError(path + " line " + std::to_string(line_number) +
                            ": expected a prediction object with user_id and label");
        try {
            labels.emplace(obj["user_id"].get<std::string>(),
                           user_type_from_string(obj["label"].get<std::string>()));
        } catch (const nlohmann::json::exception& e) {
            throw DataError(path + " line " + std::to_string(line_number) + ": " + e.what());
        } catch (const ConfigError& e) {
            throw DataError(path + " line " + std::to_string(line_number) + ": " + e.what());
        }
    }
    if (in.bad()) throw DataError("failed reading '" + path + "'");
    return labels;
}

nlohmann::json row_json(const DistributionReport& report, UserType t) {
    const DistributionReport::Row& row = report.per_class[class_index(t)];
    return {{"users", row.users},
            {"user_share", report.user_share(t)},
            {"tweets", row.tweets},
            {"tweet_share", report.tweet_share(t)},
            {"retweets", row.retweets},
            {"retweet_share", report.retweet_share(t)},
            {"favorites", row.favorites},
            {"favorite_share", report.favorite_share(t)}};
}

void run_report(const ReportOptions& opt) {
    if (opt.predictions_path.empty() == opt.labels_path.empty())
        throw ConfigError("report needs exactly one of --predictions or --labels");

    auto labels = opt.labels_path.empty() ? load_predictions(opt.predictions_path)
                                          : load_labels(opt.labels_path);

    auto [records, stats] = load_user_records(opt.users_path);
    if (stats.skipped > 0)
        std::cerr << "note: skipped " << stats.skipped << " malformed line(s) in '"
                  << opt.users_path << "'\n";

    DistributionReport report = build_distribution_report(records, labels);
    std::cout << render_distribution_table(report);

    if (!opt.json_path.empty()) {
        nlohmann::json out;
        for (UserType t : kClassOrder) out[to_string(t)] = row_json(report, t);
        out["totals"] = {{"users", report.totals.users},
                         {"tweets", report.totals.tweets},
                         {"retweets", report.totals.retweets},
                         {"favorites", report.totals.favorites}};
        out["records_without_label"] = report.records_without_label;
        std::ofstream file(opt.json_path, std::ios::binary);
        if (!file) throw DataError("cannot open '" + opt.json_path + "' for writing");
        file << out.dump(2) << '\n';
    }
}

}  // namespace

void register_report(CLI::App& app) {
    auto opt = std::make_shared<ReportOptions>();
    CLI::App* cmd = app.add_subcommand(
        "report", "Aggregate per-class user/tweet/retweet/favorite distribution");
    cmd->add_option("--users", opt->users_path, "Line-delimited JSON user records")->required();
    cmd->add_option("--predictions", opt->predictions_path, "Predictions from classify");
    cmd->add_option("--labels", opt->labels_path, "user_id,label CSV");
    cmd->add_option("--json", opt->json_path, "Write full-precision counts and shares here");
    cmd->callback([opt] { run_report(*opt); });
}

}  // namespace usertype::cli
