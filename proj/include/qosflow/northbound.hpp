#ifndef QOSFLOW_NORTHBOUND_HPP
#define QOSFLOW_NORTHBOUND_HPP

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qosflow/numeric.hpp"
#include "qosflow/store.hpp"

namespace qosflow {

struct IncompleteConfig : std::runtime_error {
	IncompleteConfig(const Term& subject, const std::string& missing);
	Term subject;
	std::string missing;
};

struct InterfaceRef {
	std::string node;  // IRI
	long long port = 0;
};

struct ValidityRef {
	std::string start;
	std::string end;
};

// One match condition, tagged by kind ("ipMatch", "ethernetMatch",
// "tcpMatch", "udpMatch"); fields keyed by their JSON names.
struct MatchCondition {
	std::string type;
	std::map<std::string, std::string> stringFields;
	std::map<std::string, long long> intFields;
};

// Tagged requirement. `value` renders into JSON; lexical and datatype keep
// the original literal so the projection stays lossless.
struct Requirement {
	std::string type;  // bandwidthBps | bytesPerInterval | delayMs | protectDegree
	NumericValue value;
	std::string valueLexical;
	std::string valueDatatype;
};

struct FlowFilterEntry {
	InterfaceRef destination;
	std::vector<MatchCondition> conditions;
	Requirement requirement;
};

struct Application {
	std::string appId;  // IRI
	std::string tenant;  // IRI, possibly empty
	InterfaceRef interface;
	ValidityRef validity;
	std::vector<FlowFilterEntry> flowFilters;
};

struct NorthboundConfig {
	std::vector<std::string> tenants;  // sorted, all sdn:Tenant subjects
	std::vector<Application> applications;  // sorted by appId
};

// Lossless projection of the store's sdn subgraph. Malformed instances
// throw IncompleteConfig. When several filters of one application share
// (destination, conditions, requirement type), only those whose value
// triple has the highest store generation survive (re-evaluation wins).
NorthboundConfig extract(const Store& store);

// Canonical JSON bytes: sorted keys, sorted lists, schema tag nbSchema=1.
// Equal configs give byte-equal output.
std::string emitString(const NorthboundConfig& config);

// The inverse projection: mints fresh blank nodes per object. Composing
// with extract reproduces the sdn subgraph up to isomorphism (on stores
// without stale duplicates).
std::vector<Triple> configTriples(const NorthboundConfig& config);

struct ConfigDelta {
	bool tenantsChanged = false;
	std::vector<std::string> tenants;  // new tenant list when changed
	std::vector<Application> appsAdded;
	std::vector<std::string> appsRemoved;  // appIds
	std::vector<Application> appsChanged;  // replacement versions
	// Filter-level view of the change, for logs; applyDelta does not use it.
	std::vector<std::pair<std::string, FlowFilterEntry>> filtersAdded;
	std::vector<std::pair<std::string, FlowFilterEntry>> filtersRemoved;

	bool empty() const {
		return !tenantsChanged && appsAdded.empty() && appsRemoved.empty() &&
			appsChanged.empty();
	}
	std::string summary() const;
};

ConfigDelta diffConfigs(const NorthboundConfig& before, const NorthboundConfig& after);
NorthboundConfig applyDelta(const NorthboundConfig& base, const ConfigDelta& delta);

// Byte sink; send throws IoError (declared in n3_parser.hpp) on failure.
class Sink {
public:
	virtual ~Sink() = default;
	virtual void send(const std::string& bytes) = 0;
};

class FileSink : public Sink {
public:
	explicit FileSink(std::string path) : path_(std::move(path)) {}
	void send(const std::string& bytes) override;

private:
	std::string path_;
};

class HttpSink : public Sink {
public:
	// Accepts http://host[:port][/path].
	explicit HttpSink(const std::string& url);
	void send(const std::string& bytes) override;

private:
	std::string host_;
	int port_ = 80;
	std::string path_;
};

class MemorySink : public Sink {
public:
	std::vector<std::string> sent;
	bool fail = false;  // next send throws when set
	void send(const std::string& bytes) override;
};

std::size_t emit(const NorthboundConfig& config, Sink& sink);

struct TickResult {
	bool checked = false;  // store was interrogated this tick
	bool emitted = false;
	bool failed = false;
	ConfigDelta delta;
};

// Sequential watch loop state. Call tick() at the chosen interval; emits on
// the first tick, then only when the store generation moved and the config
// text changed. Failed sends are retried on the next tick.
class Watcher {
public:
	Watcher(Sink& sink, std::function<void(const std::string&)> log = {})
		: sink_(&sink), log_(std::move(log)) {}

	TickResult tick(const Store& store);
	// Same, but with a caller-supplied change counter instead of the store
	// generation (for stores reloaded from disk between ticks).
	TickResult tick(const Store& store, std::uint64_t version);

private:
	Sink* sink_;
	std::function<void(const std::string&)> log_;
	bool seenStore_ = false;
	std::uint64_t lastGeneration_ = 0;
	bool haveEmitted_ = false;
	NorthboundConfig lastConfig_;
	std::string lastText_;
	bool retryPending_ = false;
	NorthboundConfig pendingConfig_;
	std::string pendingText_;
};

}  // namespace qosflow

#endif  // QOSFLOW_NORTHBOUND_HPP
