#pragma once

#include <srg/dataset.hpp>
#include <srg/miner.hpp>

#include <json.hpp>

#include <condition_variable>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <thread>
#include <vector>

namespace httplib {
class Server;
}

namespace srg {

struct ServiceResponse {
    int status = 200;
    nlohmann::json body;
};

// Routing and state of the HTTP API, independent of the transport.
class Service {
public:
    Service() = default;
    ~Service();
    Service(const Service &) = delete;
    Service & operator=(const Service &) = delete;

    void add_dataset(const std::string & id, Dataset dataset);

    ServiceResponse handle(const std::string & method, const std::string & path,
        const std::map<std::string, std::string> & query, const std::string & body);

    // Blocks until no mining run is queued or running.
    void wait_idle();

private:
    struct Run {
        std::string dataset;
        std::string status = "queued";
        nlohmann::json result;
        std::string error;
    };

    ServiceResponse route(const std::string & method, const std::vector<std::string> & parts,
        const std::map<std::string, std::string> & query, const std::string & body);
    const Dataset & dataset(const std::string & id) const;
    ServiceResponse blocks(const std::string & id, const std::map<std::string, std::string> & query);
    ServiceResponse mine(const std::string & id, const std::string & body);
    ServiceResponse run_status(const std::string & run_id);

    std::map<std::string, Dataset> datasets_;

    std::shared_mutex cache_mutex_;
    std::map<std::string, nlohmann::json> block_cache_;

    std::mutex run_mutex_;
    std::condition_variable run_done_;
    std::map<std::string, Run> runs_;
    std::map<std::string, std::unique_ptr<std::mutex>> dataset_locks_;
    std::vector<std::thread> workers_;
    int active_ = 0;
};

std::string run_id_for(const std::string & dataset_id, const MinerConfig & config);

// Routes every request on `server` to `service`, with CORS headers.
void install_routes(httplib::Server & server, Service & service);

// Serves `service` over HTTP until the process stops; CORS allows any origin.
void serve(Service & service, const std::string & host, int port);

}
