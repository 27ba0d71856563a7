#include "cli.hpp"

#include <srg/cross_validation.hpp>
#include <srg/encoding.hpp>
#include <srg/errors.hpp>
#include <srg/miner.hpp>
#include <srg/plot.hpp>
#include <srg/rule_analysis.hpp>
#include <srg/service.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace srg::cli {

namespace {
    struct DataArgs {
        std::string data;
        std::string schema;
        int class_column = 0;
        bool header = false;
    };

    void add_data_options(CLI::App * app, DataArgs & d)
    {
        app->add_option("--data", d.data, "Dataset file (CSV)")->required();
        app->add_option("--schema", d.schema, "Schema JSON");
        app->add_option("--class-column", d.class_column, "1-based class column; 0 means last");
        app->add_flag("--header", d.header, "First line is a header");
    }

    Dataset load(const DataArgs & d)
    {
        CsvOptions options;
        if (! d.schema.empty())
            options.schema = read_schema(d.schema);
        options.class_column = d.class_column;
        options.header = d.header;
        return load_csv(d.data, options);
    }

    std::string read_file(const std::string & path)
    {
        std::ifstream in(path, std::ios::binary);
        if (! in)
            throw IoError("cannot read " + path);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    nlohmann::json read_json(const std::string & path)
    {
        auto j = nlohmann::json::parse(read_file(path), nullptr, false);
        if (j.is_discarded())
            throw ValidationError(path + " is not valid JSON");
        return j;
    }

    // Outputs are staged and written only after every computation succeeded.
    struct Outputs {
        std::vector<std::pair<std::string, std::string>> files;
        std::string stdout_text;

        void add(const std::string & path, std::string text)
        {
            if (path.empty() || path == "-")
                stdout_text += text;
            else
                files.emplace_back(path, std::move(text));
        }

        void flush(std::ostream & out)
        {
            for (auto & [path, text] : files) {
                std::ofstream f(path, std::ios::binary);
                if (! f || ! (f << text))
                    throw IoError("cannot write " + path);
            }
            out << stdout_text;
        }
    };

    struct MineArgs {
        std::string config;
        std::string algorithm;
        std::string grouping;
        std::string prior;
        std::string base;
        std::optional<double> precision;
        std::optional<double> coverage;
        std::optional<std::uint64_t> seed;
        std::optional<int> target;
        std::string start;
        bool exhaustive = false;
    };

    void add_mine_options(CLI::App * app, MineArgs & m)
    {
        app->add_option("--config", m.config, "Miner config JSON; flags override it");
        app->add_option("--algo", m.algorithm, "srg0 .. srg5");
        app->add_option("--grouping", m.grouping, "sequential:3, random:30x3, groups:5;20;8,12,21, prior:.../3, expert:FILE");
        app->add_option("--prior-grouping", m.prior, "Groups mined first for most_frequent grouping");
        app->add_option("--base", m.base, "Selection used by srg3..srg5");
        app->add_option("--precision", m.precision, "Minimum rule precision in [0,1]");
        app->add_option("--coverage", m.coverage, "Minimum share of the target class a rule covers");
        app->add_option("--seed", m.seed, "Random seed");
        app->add_option("--target", m.target, "Target class code");
        app->add_option("--start", m.start, "Chain start: bottom, top or middle");
        app->add_flag("--exhaustive", m.exhaustive, "Enumerate every subset without monotone pruning");
    }

    MinerConfig build_config(const MineArgs & m)
    {
        MinerConfig c;
        if (! m.config.empty())
            c = config_from_json(read_json(m.config));
        if (m.seed)
            c.seed = *m.seed;
        if (! m.algorithm.empty())
            c.algorithm = parse_algorithm(m.algorithm);
        if (! m.grouping.empty())
            c.grouping = parse_grouping(m.grouping, c.seed);
        else if (m.seed)
            c.grouping.seed = *m.seed;
        if (! m.prior.empty())
            c.prior_grouping = parse_grouping(m.prior, c.seed);
        if (! m.base.empty())
            c.base = parse_algorithm(m.base);
        if (m.precision)
            c.thresholds.min_precision = *m.precision;
        if (m.coverage)
            c.thresholds.min_coverage = *m.coverage;
        if (m.target)
            c.target = *m.target;
        if (! m.start.empty())
            c.generation.policy.start = parse_start_point(m.start);
        if (m.exhaustive)
            c.generation.prune = false;
        c.thresholds.validate();
        return c;
    }

    std::vector<Rule> read_rules(const std::string & path)
    {
        auto text = read_file(path);
        std::vector<Rule> rules;
        auto j = nlohmann::json::parse(text, nullptr, false);
        if (j.is_discarded()) {
            std::istringstream lines(text);
            std::string line;
            while (std::getline(lines, line))
                if (line.find_first_not_of(" \t\r") != std::string::npos)
                    rules.push_back(parse_rule_text(line));
            return rules;
        }
        const auto & list = j.is_array() ? j : j.at("rules");
        for (auto & r : list) {
            if (r.is_string())
                rules.push_back(parse_rule_text(r.get<std::string>()));
            else if (r.contains("rule"))
                rules.push_back(rule_from_json(r["rule"]));
            else
                rules.push_back(rule_from_json(r));
        }
        return rules;
    }

    std::vector<int> parse_int_list(const std::string & text)
    {
        std::vector<int> out;
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ','))
            if (! item.empty()) {
                try {
                    out.push_back(std::stoi(item));
                }
                catch (const std::logic_error &) {
                    throw ValidationError("bad attribute list '" + text + "'");
                }
            }
        return out;
    }
}

int run(const std::vector<std::string> & args, std::ostream & out, std::ostream & err)
{
    CLI::App app{"Sequential rule generation and block visualization for categorical data", "srg"};
    app.require_subcommand(1);
    Outputs outputs;

    DataArgs enc_data;
    std::string enc_scheme, enc_out, enc_schema_out;
    auto * encode = app.add_subcommand("encode", "Apply an encoding scheme file");
    add_data_options(encode, enc_data);
    encode->add_option("--scheme", enc_scheme, "Scheme JSON")->required();
    encode->add_option("--out", enc_out, "Encoded CSV")->required();
    encode->add_option("--schema-out", enc_schema_out, "Encoded schema JSON")->required();

    DataArgs mine_data;
    MineArgs mine_args;
    std::string mine_json, mine_report;
    auto * mine = app.add_subcommand("mine", "Mine rules with srg0..srg5");
    add_data_options(mine, mine_data);
    add_mine_options(mine, mine_args);
    mine->add_option("--json", mine_json, "MiningResult JSON output");
    mine->add_option("--report", mine_report, "Text report output (stdout by default)");

    DataArgs cv_data;
    MineArgs cv_args;
    int folds = 10;
    bool plain = false;
    std::string cv_json, cv_report;
    auto * cv = app.add_subcommand("cv", "k-fold cross validation");
    add_data_options(cv, cv_data);
    add_mine_options(cv, cv_args);
    cv->add_option("--folds", folds, "Number of folds");
    cv->add_flag("--plain", plain, "Random instead of stratified folds");
    cv->add_option("--json", cv_json, "CV JSON output");
    cv->add_option("--report", cv_report, "Text table output (stdout by default)");

    DataArgs ov_data;
    std::string ov_rules, ov_out;
    std::optional<int> ov_class;
    auto * ov = app.add_subcommand("overlap", "Pairwise overlap table of a rule list");
    add_data_options(ov, ov_data);
    ov->add_option("--rules", ov_rules, "MiningResult JSON, rule JSON list, or one rule per line")->required();
    ov->add_option("--class", ov_class, "Class whose cases are compared (the rules' target by default)");
    ov->add_option("--out", ov_out, "Output file (stdout by default)");

    DataArgs viz_data;
    std::string viz_svg, viz_json, viz_flip;
    double viz_purity = 0.0, viz_small = 0.0, viz_merge = 0.0;
    std::optional<double> viz_relocate;
    std::optional<int> viz_sort;
    bool viz_order = false;
    auto * viz = app.add_subcommand("viz", "Block plot as SVG and plot JSON");
    add_data_options(viz, viz_data);
    viz->add_option("--svg", viz_svg, "SVG output");
    viz->add_option("--json", viz_json, "Plot JSON output");
    viz->add_option("--purity", viz_purity, "Purity filter for listed blocks");
    viz->add_option("--small", viz_small, "Merge values under this share into one block");
    viz->add_option("--merge-below-purity", viz_merge, "Merge values under this purity into one grey block");
    viz->add_option("--flip", viz_flip, "Attributes to flip, comma separated");
    viz->add_flag("--order-by-purity", viz_order, "Reorder axes by pure-block mass");
    viz->add_option("--relocate", viz_relocate, "Move blocks under this share to the top");
    viz->add_option("--sort-class", viz_sort, "Move blocks of this class to the top");

    DataArgs desc_data;
    double desc_purity = 0.8, desc_size = 0.1;
    std::string desc_out;
    auto * describe = app.add_subcommand("describe", "Linguistic description of high-purity blocks");
    add_data_options(describe, desc_data);
    describe->add_option("--purity", desc_purity, "Purity threshold");
    describe->add_option("--size", desc_size, "Minimum block share");
    describe->add_option("--out", desc_out, "Output file (stdout by default)");

    std::vector<std::string> serve_data, serve_schema;
    std::string serve_host = "127.0.0.1";
    int serve_port = 0;
    auto * srv = app.add_subcommand("serve", "Start the HTTP service");
    srv->add_option("--data", serve_data, "Dataset files; the id is the file stem")->required();
    srv->add_option("--schema", serve_schema, "Schema per dataset, in the same order");
    srv->add_option("--host", serve_host, "Bind address");
    srv->add_option("--port", serve_port, "Port (SRG_PORT, else 8080)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    }
    catch (const CLI::CallForHelp &) {
        out << app.help();
        return 0;
    }
    catch (const CLI::ParseError & e) {
        err << e.what() << '\n' << app.help();
        return 1;
    }

    try {
        if (encode->parsed()) {
            auto ds = load(enc_data);
            auto doc = nlohmann::ordered_json::parse(read_file(enc_scheme), nullptr, false);
            if (doc.is_discarded())
                throw ValidationError(enc_scheme + " is not valid JSON");
            auto & list = doc.is_array() ? doc : doc.at("encodings");
            std::vector<std::pair<int, EncodingScheme>> schemes;
            for (auto & s : list)
                schemes.push_back(scheme_from_json(s));
            auto encoded = apply_encodings(ds, schemes);
            auto schema = encoded.dataset.schema();
            schema.encodings = list;
            outputs.add(enc_out, csv_text(encoded.dataset));
            outputs.add(enc_schema_out, schema_text(schema));
            std::ostringstream note;
            note << "Encoded attributes: " << encoded.dataset.width() << '\n';
            if (! encoded.uninformative.empty()) {
                note << "Uninformative attributes:";
                for (int a : encoded.uninformative)
                    note << ' ' << a;
                note << '\n';
            }
            outputs.stdout_text += note.str();
        }
        else if (mine->parsed()) {
            auto ds = load(mine_data);
            auto config = build_config(mine_args);
            auto result = run_miner(ds, config);
            if (! mine_json.empty())
                outputs.add(mine_json, result_to_json(result).dump(2) + "\n");
            outputs.add(mine_report, text_report(result));
        }
        else if (cv->parsed()) {
            auto ds = load(cv_data);
            auto config = build_config(cv_args);
            auto report = kfold_cv(ds, folds, config, config.seed, ! plain);
            if (! cv_json.empty())
                outputs.add(cv_json, cv_to_json(report).dump(2) + "\n");
            outputs.add(cv_report, cv_text(report));
        }
        else if (ov->parsed()) {
            auto ds = load(ov_data);
            auto rules = read_rules(ov_rules);
            if (rules.empty())
                throw ValidationError("no rules in " + ov_rules);
            for (auto & r : rules)
                validate_rule(r, ds);
            outputs.add(ov_out, overlap_table(rules, ds, ov_class.value_or(rules.front().target())));
        }
        else if (viz->parsed()) {
            auto ds = load(viz_data);
            auto layout = default_layout(ds, {viz_small, viz_merge}, viz_purity);
            for (int a : parse_int_list(viz_flip))
                layout = flip_attribute(layout, a);
            if (viz_order)
                layout = reorder(layout, order_attributes_by_purity(layout, viz_purity));
            if (viz_relocate)
                layout = relocate_small_blocks(layout, *viz_relocate);
            if (viz_sort)
                layout = sort_blocks_by_class(layout, *viz_sort);
            PlotSpec spec{layout, {}, 0, 480};
            if (viz_svg.empty() && viz_json.empty())
                throw ValidationError("viz needs --svg or --json");
            if (! viz_svg.empty())
                outputs.add(viz_svg, render_svg(ds, spec));
            if (! viz_json.empty())
                outputs.add(viz_json, export_plot_json(ds, spec).dump(2) + "\n");
        }
        else if (describe->parsed()) {
            auto ds = load(desc_data);
            std::string text;
            for (auto & line : linguistic_description(ds, desc_purity, desc_size))
                text += line + "\n";
            outputs.add(desc_out, text);
        }
        else if (srv->parsed()) {
            if (! serve_schema.empty() && serve_schema.size() != serve_data.size())
                throw ValidationError("give one schema per dataset or none");
            Service service;
            for (std::size_t i = 0; i < serve_data.size(); ++i) {
                DataArgs d;
                d.data = serve_data[i];
                if (! serve_schema.empty())
                    d.schema = serve_schema[i];
                service.add_dataset(std::filesystem::path(d.data).stem().string(), load(d));
            }
            int port = serve_port;
            if (port == 0) {
                const char * env = std::getenv("SRG_PORT");
                port = env ? std::atoi(env) : 8080;
            }
            err << "listening on " << serve_host << ':' << port << '\n';
            serve(service, serve_host, port);
        }
        outputs.flush(out);
        return 0;
    }
    catch (const IoError & e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    catch (const Error & e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    catch (const nlohmann::json::exception & e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}
