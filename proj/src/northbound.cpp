#include "qosflow/northbound.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include <httplib.h>
#include <json.hpp>

#include "qosflow/n3_parser.hpp"
#include "qosflow/vocab.hpp"

namespace qosflow {

using json = nlohmann::json;

IncompleteConfig::IncompleteConfig(const Term& s, const std::string& m)
	: std::runtime_error("incomplete sdn instance " + s.debugString() + ": " + m),
	  subject(s),
	  missing(m) {}

namespace {

std::vector<Term> objectsOf(const Store& store, const Term& s, const Term& p) {
	std::vector<Term> out;
	for (const Triple& t : store.match(Pattern{s, p, std::nullopt})) out.push_back(t.object);
	return out;
}

Term one(const Store& store, const Term& s, const Term& p, const std::string& field) {
	std::vector<Term> v = objectsOf(store, s, p);
	if (v.size() != 1)
		throw IncompleteConfig(s, v.empty() ? "missing " + field : "multiple " + field);
	return v.front();
}

std::string iriOf(const Term& t, const Term& subject, const std::string& field) {
	if (!t.isIri()) throw IncompleteConfig(subject, field + " must be an IRI");
	return std::string(t.value());
}

long long intOf(const Term& t, const Term& subject, const std::string& field) {
	if (!t.isLiteral() || t.datatype() != xsd::kInteger)
		throw IncompleteConfig(subject, field + " must be an integer");
	try {
		return std::stoll(std::string(t.value()));
	} catch (const std::exception&) {
		throw IncompleteConfig(subject, field + " out of range");
	}
}

std::string stringOf(const Term& t, const Term& subject, const std::string& field) {
	if (!t.isLiteral() || t.datatype() != xsd::kString)
		throw IncompleteConfig(subject, field + " must be a string");
	return std::string(t.value());
}

InterfaceRef interfaceAt(const Store& store, const Term& node) {
	InterfaceRef out;
	out.node = iriOf(one(store, node, vocab::sdn("interfaceNode"), "interfaceNode"), node,
		"interfaceNode");
	out.port = intOf(one(store, node, vocab::sdn("interfacePort"), "interfacePort"), node,
		"interfacePort");
	return out;
}

// Known sdn fields per condition kind; anything else in the sdn namespace
// would be dropped silently, so it is rejected instead.
struct CondKind {
	const char* cls;
	const char* tag;
	std::vector<const char*> strings;
	std::vector<const char*> ints;
};

const std::vector<CondKind>& condKinds() {
	static const std::vector<CondKind> kinds = {
		{"IpMatch", "ipMatch", {"srcIp", "dstIp"}, {}},
		{"EthernetMatch", "ethernetMatch", {"srcMac", "dstMac"}, {"etherType"}},
		{"TcpMatch", "tcpMatch", {}, {"srcPort", "dstPort"}},
		{"UdpMatch", "udpMatch", {}, {"srcPort", "dstPort"}},
	};
	return kinds;
}

bool sdnNamespaced(const Term& p) {
	return p.isIri() && p.value().compare(0, ns::kSdn.size(), ns::kSdn) == 0;
}

void rejectUnknownSdnFields(const Store& store, const Term& node,
	const std::set<Term>& allowed) {
	for (const Triple& t : store.match(Pattern{node, std::nullopt, std::nullopt})) {
		if (!sdnNamespaced(t.predicate)) continue;
		if (!allowed.count(t.predicate))
			throw IncompleteConfig(node, "unsupported field " + t.predicate.debugString());
	}
}

MatchCondition conditionAt(const Store& store, const Term& node) {
	std::vector<Term> types = objectsOf(store, node, vocab::rdfType());
	const CondKind* kind = nullptr;
	for (const Term& ty : types) {
		for (const CondKind& k : condKinds()) {
			if (ty == vocab::sdn(k.cls)) {
				if (kind) throw IncompleteConfig(node, "multiple condition types");
				kind = &k;
			}
		}
	}
	if (!kind) throw IncompleteConfig(node, "missing condition type");
	MatchCondition out;
	out.type = kind->tag;
	std::set<Term> allowed;
	for (const char* f : kind->strings) {
		allowed.insert(vocab::sdn(f));
		for (const Term& v : objectsOf(store, node, vocab::sdn(f)))
			out.stringFields[f] = stringOf(v, node, f);
	}
	for (const char* f : kind->ints) {
		allowed.insert(vocab::sdn(f));
		for (const Term& v : objectsOf(store, node, vocab::sdn(f)))
			out.intFields[f] = intOf(v, node, f);
	}
	rejectUnknownSdnFields(store, node, allowed);
	return out;
}

struct ReqKind {
	const char* cls;
	const char* prop;
	const char* tag;
};

const std::vector<ReqKind>& reqKinds() {
	static const std::vector<ReqKind> kinds = {
		{"BandwidthConstraint", "minBandwidth", "bandwidthBps"},
		{"BandwidthConstraint", "bytesPerInterval", "bytesPerInterval"},
		{"DelayConstraint", "maxDelay", "delayMs"},
		{"ProtectionConstraint", "protectDegree", "protectDegree"},
	};
	return kinds;
}

Requirement requirementAt(const Store& store, const Term& node, std::uint64_t* generation) {
	std::vector<Term> types = objectsOf(store, node, vocab::rdfType());
	Requirement out;
	std::set<Term> allowed;
	int found = 0;
	for (const ReqKind& k : reqKinds()) {
		if (std::find(types.begin(), types.end(), vocab::sdn(k.cls)) == types.end()) continue;
		allowed.insert(vocab::sdn(k.prop));
		std::vector<Term> vals = objectsOf(store, node, vocab::sdn(k.prop));
		if (vals.size() > 1) throw IncompleteConfig(node, std::string("multiple ") + k.prop);
		if (vals.empty()) continue;
		const Term& lit = vals.front();
		if (!lit.isLiteral()) throw IncompleteConfig(node, std::string(k.prop) + " not a literal");
		try {
			out.value = parseNumeric(lit);
		} catch (const NonNumericLiteral&) {
			throw IncompleteConfig(node, std::string(k.prop) + " not numeric");
		}
		out.type = k.tag;
		out.valueLexical = lit.value();
		out.valueDatatype = lit.datatype();
		if (generation) *generation = store.generationOf(Triple{node, vocab::sdn(k.prop), lit});
		++found;
	}
	if (found == 0) throw IncompleteConfig(node, "missing requirement value");
	if (found > 1) throw IncompleteConfig(node, "ambiguous requirement value");
	rejectUnknownSdnFields(store, node, allowed);
	return out;
}

json toJson(const InterfaceRef& i) {
	return json{{"node", i.node}, {"port", i.port}};
}

json toJson(const MatchCondition& c) {
	json out{{"type", c.type}};
	for (const auto& [k, v] : c.stringFields) out[k] = v;
	for (const auto& [k, v] : c.intFields) out[k] = v;
	return out;
}

// Value rendering: exact integers within the double-safe range stay JSON
// numbers, wider ones become strings, everything else renders as a double.
json valueJson(const NumericValue& v) {
	static const BigInt kSafe = (BigInt(1) << 53) - 1;
	if (v.isInteger() || (v.isDecimal() && boost::multiprecision::denominator(v.asDecimal()) == 1)) {
		BigInt i = v.isInteger() ? v.asInteger()
								 : BigInt(boost::multiprecision::numerator(v.asDecimal()));
		if (i <= kSafe && i >= -kSafe) return json(static_cast<std::int64_t>(i));
		return json(i.str());
	}
	double d = v.toDouble();
	if (!std::isfinite(d)) return json(doubleLexical(d));
	return json(d);
}

json toJson(const Requirement& r) {
	return json{{"type", r.type}, {"value", valueJson(r.value)}};
}

json toJson(const FlowFilterEntry& f) {
	json conditions = json::array();
	for (const MatchCondition& c : f.conditions) conditions.push_back(toJson(c));
	return json{{"conditions", conditions}, {"destination", toJson(f.destination)},
		{"requirement", toJson(f.requirement)}};
}

json toJson(const Application& a) {
	json filters = json::array();
	for (const FlowFilterEntry& f : a.flowFilters) filters.push_back(toJson(f));
	return json{{"appId", a.appId}, {"flowFilters", filters},
		{"interface", toJson(a.interface)}, {"tenant", a.tenant},
		{"validity", json{{"end", a.validity.end}, {"start", a.validity.start}}}};
}

std::string entryText(const FlowFilterEntry& f) { return toJson(f).dump(); }
std::string appText(const Application& a) { return toJson(a).dump(); }

}  // namespace

NorthboundConfig extract(const Store& store) {
	NorthboundConfig out;
	const Term rdfType = vocab::rdfType();
	for (const Triple& t : store.match(Pattern{std::nullopt, rdfType, vocab::sdn("Tenant")}))
		out.tenants.push_back(iriOf(t.subject, t.subject, "tenant id"));
	std::sort(out.tenants.begin(), out.tenants.end());
	out.tenants.erase(std::unique(out.tenants.begin(), out.tenants.end()), out.tenants.end());

	for (const Triple& at : store.match(Pattern{std::nullopt, rdfType, vocab::sdn("Application")})) {
		const Term& app = at.subject;
		Application a;
		a.appId = iriOf(app, app, "appId");
		a.tenant = iriOf(one(store, app, vocab::sdn("appTenant"), "appTenant"), app, "appTenant");
		a.interface = interfaceAt(store, one(store, app, vocab::sdn("appInterface"), "appInterface"));
		Term validity = one(store, app, vocab::sdn("appValidity"), "appValidity");
		Term from = one(store, validity, vocab::sdn("validFrom"), "validFrom");
		Term to = one(store, validity, vocab::sdn("validTo"), "validTo");
		if (!from.isLiteral()) throw IncompleteConfig(validity, "validFrom not a literal");
		if (!to.isLiteral()) throw IncompleteConfig(validity, "validTo not a literal");
		a.validity.start = from.value();
		a.validity.end = to.value();

		struct Entry {
			FlowFilterEntry filter;
			std::uint64_t generation = 0;
		};
		std::vector<Entry> entries;
		for (const Term& ff : objectsOf(store, app, vocab::sdn("flowFilter"))) {
			Entry e;
			e.filter.destination =
				interfaceAt(store, one(store, ff, vocab::sdn("destination"), "destination"));
			for (const Term& cond : objectsOf(store, ff, vocab::sdn("condition")))
				e.filter.conditions.push_back(conditionAt(store, cond));
			if (e.filter.conditions.empty()) throw IncompleteConfig(ff, "missing condition");
			std::sort(e.filter.conditions.begin(), e.filter.conditions.end(),
				[](const MatchCondition& x, const MatchCondition& y) {
					return toJson(x).dump() < toJson(y).dump();
				});
			e.filter.requirement = requirementAt(
				store, one(store, ff, vocab::sdn("requirement"), "requirement"), &e.generation);
			entries.push_back(std::move(e));
		}

		// Re-evaluation wins: within one logical slot, keep only the
		// newest generation.
		std::map<std::string, std::uint64_t> newest;
		for (const Entry& e : entries) {
			std::string slot = toJson(e.filter.destination).dump() + "|";
			for (const MatchCondition& c : e.filter.conditions) slot += toJson(c).dump() + "|";
			slot += e.filter.requirement.type;
			auto [it, inserted] = newest.emplace(slot, e.generation);
			if (!inserted && e.generation > it->second) it->second = e.generation;
		}
		for (Entry& e : entries) {
			std::string slot = toJson(e.filter.destination).dump() + "|";
			for (const MatchCondition& c : e.filter.conditions) slot += toJson(c).dump() + "|";
			slot += e.filter.requirement.type;
			if (e.generation == newest.at(slot)) a.flowFilters.push_back(std::move(e.filter));
		}
		std::sort(a.flowFilters.begin(), a.flowFilters.end(),
			[](const FlowFilterEntry& x, const FlowFilterEntry& y) {
				return entryText(x) < entryText(y);
			});
		out.applications.push_back(std::move(a));
	}
	std::sort(out.applications.begin(), out.applications.end(),
		[](const Application& x, const Application& y) { return x.appId < y.appId; });
	return out;
}

std::string emitString(const NorthboundConfig& config) {
	json apps = json::array();
	for (const Application& a : config.applications) apps.push_back(toJson(a));
	json root{{"applications", apps}, {"nbSchema", 1},
		{"tenant", config.tenants.empty() ? json(nullptr) : json(config.tenants.front())},
		{"tenants", config.tenants}};
	return root.dump() + "\n";
}

std::vector<Triple> configTriples(const NorthboundConfig& config) {
	std::vector<Triple> out;
	const Term rdfType = vocab::rdfType();
	int counter = 0;
	auto fresh = [&counter](const std::string& role) {
		return Term::blank("nb" + std::to_string(counter++) + "_" + role);
	};
	auto emitInterface = [&](const Term& node, const InterfaceRef& ref) {
		out.push_back(Triple{node, rdfType, vocab::sdn("Interface")});
		out.push_back(Triple{node, vocab::sdn("interfaceNode"), Term::iri(ref.node)});
		out.push_back(Triple{node, vocab::sdn("interfacePort"), Term::integer(ref.port)});
	};
	for (const std::string& t : config.tenants)
		out.push_back(Triple{Term::iri(t), rdfType, vocab::sdn("Tenant")});
	for (const Application& a : config.applications) {
		Term app = Term::iri(a.appId);
		out.push_back(Triple{app, rdfType, vocab::sdn("Application")});
		out.push_back(Triple{app, vocab::sdn("appTenant"), Term::iri(a.tenant)});
		Term iface = fresh("if");
		out.push_back(Triple{app, vocab::sdn("appInterface"), iface});
		emitInterface(iface, a.interface);
		Term validity = fresh("vp");
		out.push_back(Triple{app, vocab::sdn("appValidity"), validity});
		out.push_back(Triple{validity, rdfType, vocab::sdn("ValidityPeriod")});
		out.push_back(Triple{validity, vocab::sdn("validFrom"),
			Term::literal(a.validity.start, std::string(xsd::kDateTime))});
		out.push_back(Triple{validity, vocab::sdn("validTo"),
			Term::literal(a.validity.end, std::string(xsd::kDateTime))});
		for (const FlowFilterEntry& f : a.flowFilters) {
			Term ff = fresh("ff");
			out.push_back(Triple{app, vocab::sdn("flowFilter"), ff});
			out.push_back(Triple{ff, rdfType, vocab::sdn("FlowFilter")});
			Term dest = fresh("dif");
			out.push_back(Triple{ff, vocab::sdn("destination"), dest});
			emitInterface(dest, f.destination);
			for (const MatchCondition& c : f.conditions) {
				Term cond = fresh("cond");
				out.push_back(Triple{ff, vocab::sdn("condition"), cond});
				for (const CondKind& k : condKinds()) {
					if (c.type != k.tag) continue;
					out.push_back(Triple{cond, rdfType, vocab::sdn(k.cls)});
				}
				for (const auto& [field, v] : c.stringFields)
					out.push_back(Triple{cond, vocab::sdn(field), Term::str(v)});
				for (const auto& [field, v] : c.intFields)
					out.push_back(Triple{cond, vocab::sdn(field), Term::integer(v)});
			}
			Term req = fresh("req");
			out.push_back(Triple{ff, vocab::sdn("requirement"), req});
			for (const ReqKind& k : reqKinds()) {
				if (f.requirement.type != k.tag) continue;
				out.push_back(Triple{req, rdfType, vocab::sdn(k.cls)});
				out.push_back(Triple{req, vocab::sdn(k.prop),
					Term::literal(f.requirement.valueLexical, f.requirement.valueDatatype)});
			}
		}
	}
	std::sort(out.begin(), out.end());
	out.erase(std::unique(out.begin(), out.end()), out.end());
	return out;
}

std::string ConfigDelta::summary() const {
	std::string out;
	if (tenantsChanged) out += "tenants changed; ";
	out += std::to_string(appsAdded.size()) + " app(s) added, " +
		std::to_string(appsRemoved.size()) + " removed, " +
		std::to_string(appsChanged.size()) + " changed; " +
		std::to_string(filtersAdded.size()) + " filter(s) added, " +
		std::to_string(filtersRemoved.size()) + " removed";
	return out;
}

ConfigDelta diffConfigs(const NorthboundConfig& before, const NorthboundConfig& after) {
	ConfigDelta delta;
	if (before.tenants != after.tenants) {
		delta.tenantsChanged = true;
		delta.tenants = after.tenants;
	}
	std::map<std::string, const Application*> old;
	for (const Application& a : before.applications) old[a.appId] = &a;
	std::set<std::string> seen;
	for (const Application& a : after.applications) {
		seen.insert(a.appId);
		auto it = old.find(a.appId);
		if (it == old.end()) {
			delta.appsAdded.push_back(a);
			for (const FlowFilterEntry& f : a.flowFilters)
				delta.filtersAdded.emplace_back(a.appId, f);
			continue;
		}
		if (appText(*it->second) == appText(a)) continue;
		delta.appsChanged.push_back(a);
		std::multiset<std::string> oldEntries;
		for (const FlowFilterEntry& f : it->second->flowFilters) oldEntries.insert(entryText(f));
		std::multiset<std::string> newEntries;
		for (const FlowFilterEntry& f : a.flowFilters) newEntries.insert(entryText(f));
		for (const FlowFilterEntry& f : a.flowFilters) {
			if (!oldEntries.count(entryText(f))) delta.filtersAdded.emplace_back(a.appId, f);
		}
		for (const FlowFilterEntry& f : it->second->flowFilters) {
			if (!newEntries.count(entryText(f))) delta.filtersRemoved.emplace_back(a.appId, f);
		}
	}
	for (const Application& a : before.applications) {
		if (seen.count(a.appId)) continue;
		delta.appsRemoved.push_back(a.appId);
		for (const FlowFilterEntry& f : a.flowFilters)
			delta.filtersRemoved.emplace_back(a.appId, f);
	}
	return delta;
}

NorthboundConfig applyDelta(const NorthboundConfig& base, const ConfigDelta& delta) {
	NorthboundConfig out = base;
	if (delta.tenantsChanged) out.tenants = delta.tenants;
	std::set<std::string> removed(delta.appsRemoved.begin(), delta.appsRemoved.end());
	std::map<std::string, const Application*> replaced;
	for (const Application& a : delta.appsChanged) replaced[a.appId] = &a;
	std::vector<Application> apps;
	for (Application& a : out.applications) {
		if (removed.count(a.appId)) continue;
		auto it = replaced.find(a.appId);
		apps.push_back(it == replaced.end() ? std::move(a) : *it->second);
	}
	for (const Application& a : delta.appsAdded) apps.push_back(a);
	std::sort(apps.begin(), apps.end(),
		[](const Application& x, const Application& y) { return x.appId < y.appId; });
	out.applications = std::move(apps);
	return out;
}

void FileSink::send(const std::string& bytes) {
	std::string tmp = path_ + ".tmp";
	{
		std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
		if (!out) throw IoError("cannot open " + tmp);
		out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
		if (!out) throw IoError("short write to " + tmp);
	}
	if (std::rename(tmp.c_str(), path_.c_str()) != 0)
		throw IoError("cannot rename " + tmp + " to " + path_);
}

HttpSink::HttpSink(const std::string& url) {
	const std::string scheme = "http://";
	if (url.compare(0, scheme.size(), scheme) != 0)
		throw IoError("only http:// sinks are supported: " + url);
	std::string rest = url.substr(scheme.size());
	std::size_t slash = rest.find('/');
	std::string hostport = slash == std::string::npos ? rest : rest.substr(0, slash);
	path_ = slash == std::string::npos ? "/" : rest.substr(slash);
	std::size_t colon = hostport.rfind(':');
	if (colon == std::string::npos) {
		host_ = hostport;
	} else {
		host_ = hostport.substr(0, colon);
		try {
			port_ = std::stoi(hostport.substr(colon + 1));
		} catch (const std::exception&) {
			throw IoError("bad port in url " + url);
		}
	}
	if (host_.empty()) throw IoError("missing host in url " + url);
}

void HttpSink::send(const std::string& bytes) {
	httplib::Client client(host_, port_);
	client.set_connection_timeout(5, 0);
	httplib::Result res = client.Post(path_, bytes, "application/json");
	if (!res) throw IoError("POST to " + host_ + " failed: " + httplib::to_string(res.error()));
	if (res->status < 200 || res->status >= 300)
		throw IoError("POST to " + host_ + " returned status " + std::to_string(res->status));
}

void MemorySink::send(const std::string& bytes) {
	if (fail) {
		fail = false;
		throw IoError("memory sink forced failure");
	}
	sent.push_back(bytes);
}

std::size_t emit(const NorthboundConfig& config, Sink& sink) {
	std::string bytes = emitString(config);
	sink.send(bytes);
	return bytes.size();
}

TickResult Watcher::tick(const Store& store) { return tick(store, store.generation()); }

TickResult Watcher::tick(const Store& store, std::uint64_t gen) {
	TickResult result;
	bool changed = !seenStore_ || gen != lastGeneration_;
	if (!changed && !retryPending_) {
		lastGeneration_ = gen;
		return result;
	}
	result.checked = true;
	NorthboundConfig config;
	std::string text;
	if (retryPending_ && !changed) {
		config = pendingConfig_;
		text = pendingText_;
	} else {
		config = extract(store);
		text = emitString(config);
	}
	seenStore_ = true;
	lastGeneration_ = gen;
	if (haveEmitted_ && text == lastText_) {
		retryPending_ = false;
		return result;
	}
	result.delta = diffConfigs(lastConfig_, config);
	if (log_ && haveEmitted_) log_("delta: " + result.delta.summary());
	try {
		sink_->send(text);
	} catch (const IoError& e) {
		result.failed = true;
		retryPending_ = true;
		pendingConfig_ = std::move(config);
		pendingText_ = std::move(text);
		if (log_) log_(std::string("send failed, will retry: ") + e.what());
		return result;
	}
	result.emitted = true;
	retryPending_ = false;
	haveEmitted_ = true;
	lastConfig_ = std::move(config);
	lastText_ = std::move(text);
	return result;
}

}  // namespace qosflow
