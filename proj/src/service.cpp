#include <srg/errors.hpp>
#include <srg/plot.hpp>
#include <srg/rule_analysis.hpp>
#include <srg/service.hpp>

#include <httplib.h>

#include <cstdio>

namespace srg {

namespace {
    struct NotFound : Error {
        using Error::Error;
    };

    std::vector<std::string> split_path(const std::string & path)
    {
        std::vector<std::string> parts;
        std::string cur;
        for (char c : path) {
            if (c == '/') {
                if (! cur.empty())
                    parts.push_back(cur);
                cur.clear();
            }
            else
                cur += c;
        }
        if (! cur.empty())
            parts.push_back(cur);
        return parts;
    }

    nlohmann::json parse_body(const std::string & body)
    {
        if (body.empty())
            return nlohmann::json::object();
        auto j = nlohmann::json::parse(body, nullptr, false);
        if (j.is_discarded())
            throw ValidationError("request body is not valid JSON");
        return j;
    }

    double number_param(const std::map<std::string, std::string> & q, const std::string & key, double fallback)
    {
        auto it = q.find(key);
        if (it == q.end() || it->second.empty())
            return fallback;
        try {
            std::size_t used = 0;
            double v = std::stod(it->second, &used);
            if (used != it->second.size())
                throw ValidationError("bad number for " + key);
            return v;
        }
        catch (const std::logic_error &) {
            throw ValidationError("bad number for " + key);
        }
    }

    nlohmann::json summary_json(const std::string & id, const Dataset & ds)
    {
        nlohmann::json attrs = nlohmann::json::array();
        for (auto & a : ds.attributes())
            attrs.push_back({{"index", a.index}, {"name", a.name}, {"mtype", to_string(a.kind)},
                {"values", a.codebook.values()}});
        nlohmann::json classes = nlohmann::json::array();
        for (ClassId c : ds.class_ids())
            classes.push_back({{"id", c}, {"name", ds.class_name(c)}, {"count", ds.class_count(c)}});
        return {{"id", id}, {"cases", ds.size()}, {"attributes", attrs}, {"classes", classes}};
    }

    Rule rule_from_body(const nlohmann::json & j, const Dataset & ds)
    {
        Rule rule;
        if (j.contains("text")) {
            if (! j["text"].is_string())
                throw ValidationError("text must be a string");
            rule = parse_rule_text(j["text"].get<std::string>());
        }
        else
            rule = rule_from_json(j.contains("rule") ? j["rule"] : j);
        validate_rule(rule, ds);
        return rule;
    }

    nlohmann::json rule_response(const Rule & rule, const Dataset & ds)
    {
        return {{"rule", rule_to_json(rule)}, {"text", rule.text()}, {"metrics", metrics_to_json(metrics(rule, ds))}};
    }

    AxisLayout apply_transforms(AxisLayout layout, const nlohmann::json & transforms)
    {
        if (! transforms.is_array())
            throw ValidationError("transforms must be a list");
        for (auto & t : transforms) {
            auto op = t.value("op", std::string());
            if (op == "flip")
                layout = flip_attribute(layout, t.at("attr").get<int>());
            else if (op == "reorder")
                layout = reorder(layout, t.at("order").get<std::vector<int>>());
            else if (op == "order_by_purity")
                layout = reorder(layout, order_attributes_by_purity(layout, t.value("purity", layout.purity_threshold)));
            else if (op == "relocate")
                layout = relocate_small_blocks(layout, t.value("threshold", 0.2));
            else if (op == "sort")
                layout = sort_blocks_by_class(layout, t.at("class").get<ClassId>(), t.value("top", true));
            else
                throw ValidationError("unknown layout transform '" + op + "'");
        }
        return layout;
    }
}

std::string run_id_for(const std::string & dataset_id, const MinerConfig & config)
{
    auto key = dataset_id + '\n' + config_to_json(config).dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : key) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Service::~Service()
{
    for (auto & t : workers_)
        t.join();
}

void Service::add_dataset(const std::string & id, Dataset dataset)
{
    std::lock_guard lock(run_mutex_);
    datasets_[id] = std::move(dataset);
    dataset_locks_.emplace(id, std::make_unique<std::mutex>());
}

void Service::wait_idle()
{
    std::unique_lock lock(run_mutex_);
    run_done_.wait(lock, [&] { return active_ == 0; });
}

const Dataset & Service::dataset(const std::string & id) const
{
    auto it = datasets_.find(id);
    if (it == datasets_.end())
        throw NotFound("unknown dataset '" + id + "'");
    return it->second;
}

ServiceResponse Service::handle(const std::string & method, const std::string & path,
    const std::map<std::string, std::string> & query, const std::string & body)
{
    try {
        return route(method, split_path(path), query, body);
    }
    catch (const NotFound & e) {
        return {404, {{"error", e.what()}}};
    }
    catch (const ValidationError & e) {
        return {422, {{"error", e.what()}}};
    }
    catch (const nlohmann::json::exception & e) {
        return {422, {{"error", e.what()}}};
    }
    catch (const Error & e) {
        return {422, {{"error", e.what()}}};
    }
}

ServiceResponse Service::route(const std::string & method, const std::vector<std::string> & p,
    const std::map<std::string, std::string> & query, const std::string & body)
{
    bool get = method == "GET", post = method == "POST";
    if (p.size() == 1 && p[0] == "datasets" && get) {
        nlohmann::json out = nlohmann::json::array();
        for (auto & [id, ds] : datasets_)
            out.push_back({{"id", id}, {"cases", ds.size()}, {"attributes", ds.width()},
                {"classes", ds.class_schema().codebook.size()}});
        return {200, out};
    }
    if (p.size() == 2 && p[0] == "runs" && get)
        return run_status(p[1]);
    if (p.size() >= 3 && p[0] == "datasets") {
        const auto & id = p[1];
        const auto & ds = dataset(id);
        std::string tail = p[2];
        for (std::size_t i = 3; i < p.size(); ++i)
            tail += "/" + p[i];
        if (tail == "summary" && get)
            return {200, summary_json(id, ds)};
        if (tail == "blocks" && get)
            return blocks(id, query);
        if (tail == "describe" && get) {
            auto lines = linguistic_description(ds, number_param(query, "purity", 0.8), number_param(query, "size", 0.1));
            return {200, {{"lines", lines}}};
        }
        if (tail == "layout" && post) {
            auto j = parse_body(body);
            BlockOptions options{j.value("small", 0.0), j.value("merge_below_purity", 0.0)};
            auto layout = default_layout(ds, options, j.value("purity", 0.0));
            layout = apply_transforms(layout, j.value("transforms", nlohmann::json::array()));
            PlotSpec spec{layout, {}, 0, 480};
            auto out = export_plot_json(ds, spec);
            out["layout"] = layout_to_json(layout);
            return {200, out};
        }
        if (tail == "rule/metrics" && post)
            return {200, rule_response(rule_from_body(parse_body(body), ds), ds)};
        if (tail == "rule/from-blocks" && post) {
            auto j = parse_body(body);
            std::vector<BlockSelection> selections;
            for (auto & s : j.at("selections")) {
                Block b;
                b.attribute = s.at("attr").get<int>();
                b.values = s.at("values").get<std::vector<Code>>();
                std::sort(b.values.begin(), b.values.end());
                selections.push_back({b, s.value("in", true)});
            }
            auto rule = visual_rule_from_blocks(selections, j.value("target", 1));
            validate_rule(rule, ds);
            return {200, rule_response(rule, ds)};
        }
        if (tail == "mine" && post)
            return mine(id, body);
    }
    throw NotFound("no route for " + method);
}

ServiceResponse Service::blocks(const std::string & id, const std::map<std::string, std::string> & query)
{
    std::string key = id;
    for (auto & [k, v] : query)
        key += "&" + k + "=" + v;
    {
        std::shared_lock lock(cache_mutex_);
        auto it = block_cache_.find(key);
        if (it != block_cache_.end())
            return {200, it->second};
    }
    const auto & ds = dataset(id);
    double purity = number_param(query, "purity", 0.0);
    BlockOptions options{number_param(query, "small", 0.0), 0.0};
    std::optional<int> ref;
    if (query.count("ref") && ! query.at("ref").empty() && query.at("ref") != "class")
        ref = static_cast<int>(number_param(query, "ref", 0));
    auto axis_json = [&](int a) {
        nlohmann::json list = nlohmann::json::array();
        for (auto & b : purity_filter(reference_blocks(ds, a, ref, options), purity))
            list.push_back(block_to_json(b));
        return nlohmann::json{{"attr", a}, {"blocks", list}};
    };
    nlohmann::json out;
    if (query.count("attr") && ! query.at("attr").empty())
        out = axis_json(static_cast<int>(number_param(query, "attr", 0)));
    else {
        out["axes"] = nlohmann::json::array();
        for (int a = 1; a <= ds.width(); ++a)
            out["axes"].push_back(axis_json(a));
    }
    std::unique_lock lock(cache_mutex_);
    block_cache_[key] = out;
    return {200, out};
}

ServiceResponse Service::mine(const std::string & id, const std::string & body)
{
    const auto & ds = dataset(id);
    auto config = config_from_json(parse_body(body));
    auto run_id = run_id_for(id, config);
    std::lock_guard lock(run_mutex_);
    auto it = runs_.find(run_id);
    if (it != runs_.end()) {
        if (it->second.status == "queued" || it->second.status == "running")
            return {409, {{"run_id", run_id}, {"status", it->second.status}}};
        return {200, {{"run_id", run_id}, {"status", it->second.status}}};
    }
    runs_[run_id].dataset = id;
    ++active_;
    workers_.emplace_back([this, run_id, config, &ds, id] {
        std::lock_guard serial(*dataset_locks_.at(id));
        {
            std::lock_guard l(run_mutex_);
            runs_[run_id].status = "running";
        }
        nlohmann::json result;
        std::string error;
        try {
            result = result_to_json(run_miner(ds, config));
        }
        catch (const std::exception & e) {
            error = e.what();
        }
        std::lock_guard l(run_mutex_);
        auto & run = runs_[run_id];
        run.status = error.empty() ? "done" : "failed";
        run.result = std::move(result);
        run.error = error;
        --active_;
        run_done_.notify_all();
    });
    return {202, {{"run_id", run_id}, {"status", "queued"}}};
}

ServiceResponse Service::run_status(const std::string & run_id)
{
    std::lock_guard lock(run_mutex_);
    auto it = runs_.find(run_id);
    if (it == runs_.end())
        throw NotFound("unknown run '" + run_id + "'");
    nlohmann::json out = {{"run_id", run_id}, {"dataset", it->second.dataset}, {"status", it->second.status}};
    if (it->second.status == "done")
        out["result"] = it->second.result;
    if (it->second.status == "failed")
        out["error"] = it->second.error;
    return {200, out};
}

void install_routes(httplib::Server & server, Service & service)
{
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
        {"Access-Control-Allow-Headers", "Content-Type"}, {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
    auto handler = [&service](const httplib::Request & req, httplib::Response & res) {
        std::map<std::string, std::string> query;
        for (auto & [k, v] : req.params)
            query.emplace(k, v);
        auto out = service.handle(req.method, req.path, query, req.body);
        res.status = out.status;
        res.set_content(out.body.dump(), "application/json");
    };
    server.Get(".*", handler);
    server.Post(".*", handler);
    server.Options(".*", [](const httplib::Request &, httplib::Response & res) { res.status = 204; });
}

void serve(Service & service, const std::string & host, int port)
{
    httplib::Server server;
    install_routes(server, service);
    if (! server.listen(host, port))
        throw IoError("cannot listen on " + host + ":" + std::to_string(port));
}

}
