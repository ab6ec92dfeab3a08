#include "qosflow/translator.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <utility>

#include "qosflow/graph_iso.hpp"
#include "qosflow/vocab.hpp"

namespace qosflow {

UnresolvedReference::UnresolvedReference(const Term& c, const std::string& ref)
	: TranslationError("unresolved reference " + ref + " for constraint " + c.debugString()),
	  constraint(c),
	  reference(ref) {}

namespace {

// Subject -> (predicate -> objects) view of a document's triples.
using DocIndex = std::map<Term, std::map<Term, std::vector<Term>>>;

DocIndex indexDoc(const Document& doc) {
	DocIndex idx;
	for (const Triple& t : doc.triples) idx[t.subject][t.predicate].push_back(t.object);
	return idx;
}

const Term* single(const DocIndex& idx, const Term& s, const Term& p) {
	auto si = idx.find(s);
	if (si == idx.end()) return nullptr;
	auto pi = si->second.find(p);
	if (pi == si->second.end() || pi->second.size() != 1) return nullptr;
	return &pi->second.front();
}

CalcNode parseCalcNode(const DocIndex& idx, const Term& node, const std::string& packName);

std::vector<CalcNode> parseCalcArgs(const DocIndex& idx, const Term& list,
	const std::string& packName) {
	if (!list.isList())
		throw TranslationError("pack " + packName + ": operator arguments must be a list");
	std::vector<CalcNode> out;
	for (const Term& e : list.elements()) out.push_back(parseCalcNode(idx, e, packName));
	return out;
}

CalcNode parseCalcNode(const DocIndex& idx, const Term& node, const std::string& packName) {
	struct OpSpec {
		const char* prop;
		CalcNode::Kind kind;
	};
	static const OpSpec ops[] = {
		{"productOf", CalcNode::Kind::Product},
		{"sumOf", CalcNode::Kind::Sum},
		{"differenceOf", CalcNode::Kind::Difference},
		{"quotientOf", CalcNode::Kind::Quotient},
	};
	CalcNode out;
	int kinds = 0;
	if (const Term* v = single(idx, node, vocab::clc("lit"))) {
		out.kind = CalcNode::Kind::Literal;
		out.ref = *v;
		++kinds;
	}
	if (const Term* v = single(idx, node, vocab::clc("deviceProperty"))) {
		out.kind = CalcNode::Kind::DeviceProperty;
		out.ref = *v;
		++kinds;
	}
	if (const Term* v = single(idx, node, vocab::clc("param"))) {
		out.kind = CalcNode::Kind::Param;
		out.ref = *v;
		++kinds;
	}
	for (const OpSpec& op : ops) {
		if (const Term* l = single(idx, node, vocab::clc(op.prop))) {
			out.kind = op.kind;
			out.args = parseCalcArgs(idx, *l, packName);
			// The rule route evaluates operators only over non-empty argument
			// lists, so empty applications could never produce a value; reject
			// them as authoring errors.
			if (out.args.empty())
				throw TranslationError("pack " + packName + ": " + op.prop + " needs arguments");
			++kinds;
		}
	}
	if (kinds != 1)
		throw TranslationError("pack " + packName + ": calculation node " + node.debugString() +
			" must have exactly one role, found " + std::to_string(kinds));
	return out;
}

// Predicate -> all object values, the relational view the rule route sees.
using Profile = std::map<Term, std::vector<Term>>;

// Distinct values only, ordered by their canonical form; mirrors the rule
// route, where equal derived triples collapse into one.
void dedupValues(std::vector<NumericValue>& vals) {
	std::sort(vals.begin(), vals.end(), [](const NumericValue& a, const NumericValue& b) {
		return termCompare(formatNumeric(a), formatNumeric(b)) < 0;
	});
	vals.erase(std::unique(vals.begin(), vals.end(),
				   [](const NumericValue& a, const NumericValue& b) {
					   return formatNumeric(a) == formatNumeric(b);
				   }),
		vals.end());
}

// Every value a calculation can take: leaves may be multi-valued (several
// devices or repeated parameters), operators combine alternatives pointwise
// over all argument choices, exactly as the rules enumerate them.
std::vector<NumericValue> resolveAll(const CalcNode& node, const Profile& deviceProps,
	const Profile& params, const Term& c) {
	const Profile* leaf = nullptr;
	const char* what = nullptr;
	switch (node.kind) {
		case CalcNode::Kind::Literal:
			return {parseNumeric(node.ref)};
		case CalcNode::Kind::DeviceProperty:
			leaf = &deviceProps;
			what = "device property ";
			break;
		case CalcNode::Kind::Param:
			leaf = &params;
			what = "parameter ";
			break;
		default:
			break;
	}
	if (leaf) {
		auto it = leaf->find(node.ref);
		if (it == leaf->end() || it->second.empty())
			throw UnresolvedReference(c, what + node.ref.value());
		std::vector<NumericValue> out;
		out.reserve(it->second.size());
		for (const Term& t : it->second) out.push_back(parseNumeric(t));
		dedupValues(out);
		return out;
	}
	std::vector<NumericValue> acc = resolveAll(node.args.front(), deviceProps, params, c);
	for (std::size_t i = 1; i < node.args.size(); ++i) {
		std::vector<NumericValue> arg = resolveAll(node.args[i], deviceProps, params, c);
		std::vector<NumericValue> next;
		next.reserve(acc.size() * arg.size());
		for (const NumericValue& a : acc) {
			for (const NumericValue& v : arg) {
				switch (node.kind) {
					case CalcNode::Kind::Product: next.push_back(a * v); break;
					case CalcNode::Kind::Sum: next.push_back(a + v); break;
					case CalcNode::Kind::Difference: next.push_back(a - v); break;
					case CalcNode::Kind::Quotient: next.push_back(a / v); break;
					default: throw TranslationError("corrupt calculation node");
				}
			}
		}
		dedupValues(next);
		acc = std::move(next);
	}
	return acc;
}

}  // namespace

NumericValue resolveCalculation(const CalcNode& node, const std::map<Term, Term>& deviceProps,
	const std::map<Term, Term>& params, const Term& c) {
	Profile dp;
	for (const auto& [k, v] : deviceProps) dp[k] = {v};
	Profile pp;
	for (const auto& [k, v] : params) pp[k] = {v};
	return resolveAll(node, dp, pp, c).front();  // single-valued inputs, one value
}

Translator Translator::fromPacks(const std::vector<std::string>& names) {
	Translator out;
	for (const std::string& name : names) {
		const Document& doc = rulePack(name);
		out.packNames_.push_back(name);
		out.packDocs_.push_back(&doc);
		DocIndex idx = indexDoc(doc);
		for (const Triple& t :
			std::vector<Triple>(doc.triples.begin(), doc.triples.end())) {
			if (!(t.predicate == vocab::clc("translation"))) continue;
			const Term& ct = t.subject;
			const Term& tgt = t.object;
			const Term* cls = single(idx, tgt, vocab::clc("producesConstraint"));
			const Term* vp = single(idx, tgt, vocab::clc("valueProperty"));
			const Term* root = single(idx, tgt, vocab::clc("calculation"));
			if (!cls || !vp || !root)
				throw TranslationError("pack " + name + ": incomplete translation target for " +
					ct.debugString());
			TargetSpec spec;
			spec.constraintClass = ct;
			spec.producesClass = *cls;
			spec.valueProperty = *vp;
			spec.calc = parseCalcNode(idx, *root, name);
			out.targets_.push_back(std::move(spec));
		}
	}
	// Deterministic target order regardless of pack listing order.
	std::sort(out.targets_.begin(), out.targets_.end(), [](const TargetSpec& a, const TargetSpec& b) {
		if (int c = termCompare(a.constraintClass, b.constraintClass)) return c < 0;
		if (int c = termCompare(a.producesClass, b.producesClass)) return c < 0;
		return termCompare(a.valueProperty, b.valueProperty) < 0;
	});
	return out;
}

RuleSet Translator::buildRuleSet() const {
	RuleSet rs;
	for (const Document* doc : packDocs_) rs.addDocument(*doc);
	return rs;
}

namespace {

std::vector<Term> objectsOf(const Store& view, const Term& s, const Term& p) {
	std::vector<Term> out;
	for (const Triple& t : view.match(Pattern{s, p, std::nullopt})) out.push_back(t.object);
	return out;
}

std::vector<Term> subjectsOf(const Store& view, const Term& p, const Term& o) {
	std::vector<Term> out;
	for (const Triple& t : view.match(Pattern{std::nullopt, p, o})) out.push_back(t.subject);
	return out;
}

// Union of the subjects' predicate -> object relations, each object list
// sorted and distinct.
Profile unionProfile(const Store& view, const std::vector<Term>& subjects) {
	Profile out;
	for (const Term& s : subjects) {
		for (const Triple& t : view.match(Pattern{s, std::nullopt, std::nullopt}))
			out[t.predicate].push_back(t.object);
	}
	for (auto& [p, objs] : out) {
		std::sort(objs.begin(), objs.end(),
			[](const Term& a, const Term& b) { return termCompare(a, b) < 0; });
		objs.erase(std::unique(objs.begin(), objs.end()), objs.end());
	}
	return out;
}

// The direct route is a hand-compiled mirror of the core pack's three
// network-facing rules. To stay byte-identical with the rule route it does
// not hard-code conclusions: it locates each rule by its conclusion shape,
// learns which variable plays which role, and lets the engine instantiate
// the conclusion. A missing rule simply disables its layer, matching a rule
// set that cannot derive it; an unrecognizable variant is an error, because
// a silent mismatch would surface as divergence later.
struct TenantShape {
	CompiledRule rule;
	std::string rVar;  // the recipe
};

struct AppShape {
	CompiledRule rule;
	std::string fVar;  // the source offering
	std::string rVar;  // the tenant recipe
};

struct FilterShape {
	CompiledRule rule;
	std::string fVar;    // source offering
	std::string toVar;   // destination offering
	std::string srcVar;  // source address
	std::string dstVar;  // destination address
	std::string clsVar;  // requirement class
	std::string vpVar;   // value property
	std::string vVar;    // value
	std::string cVar;    // constraint
};

struct MirrorShapes {
	std::optional<TenantShape> tenant;
	std::optional<AppShape> app;
	std::optional<FilterShape> filter;
};

template <class F>
const CompiledRule* uniqueRuleWhere(const RuleSet& rs, F pred, const char* what) {
	const CompiledRule* found = nullptr;
	for (const CompiledRule& r : rs.rules()) {
		if (!std::any_of(r.conclusion.begin(), r.conclusion.end(), pred)) continue;
		if (found)
			throw TranslationError(std::string("multiple pack rules conclude the ") + what +
				"; the direct engine cannot mirror that");
		found = &r;
	}
	return found;
}

template <class F>
const Triple& uniqueTriple(const CompiledRule& rule, F pred, const char* what) {
	const Triple* found = nullptr;
	for (const Triple& t : rule.conclusion) {
		if (!pred(t)) continue;
		if (found)
			throw TranslationError(std::string("pack rule concludes more than one ") + what +
				"; the direct engine cannot mirror that");
		found = &t;
	}
	if (!found)
		throw TranslationError(std::string("pack rule conclusion lacks the expected ") + what);
	return *found;
}

std::string varName(const Term& t, const char* role) {
	if (!t.isVariable())
		throw TranslationError(std::string("pack rule puts a non-variable where the direct "
								   "engine expects the ") +
			role);
	return t.value();
}

void checkKeyedOn(const CompiledRule& rule, std::set<std::string> roles, const char* what) {
	std::vector<std::string> expected(roles.begin(), roles.end());
	if (rule.conclusionVars != expected)
		throw TranslationError(std::string("pack ") + what +
			" rule conclusion is keyed on variables the direct engine does not fill");
}

MirrorShapes extractShapes(const RuleSet& rs) {
	const Term rdfType = vocab::rdfType();
	MirrorShapes out;
	if (const CompiledRule* r = uniqueRuleWhere(
			rs,
			[&rdfType](const Triple& t) {
				return t.predicate == rdfType && t.object == vocab::sdn("Tenant") &&
					t.subject.isVariable();
			},
			"tenant type")) {
		TenantShape s{*r, {}};
		const Triple& tt = uniqueTriple(
			*r,
			[&rdfType](const Triple& t) {
				return t.predicate == rdfType && t.object == vocab::sdn("Tenant");
			},
			"tenant type triple");
		s.rVar = varName(tt.subject, "tenant");
		checkKeyedOn(*r, {s.rVar}, "tenant");
		out.tenant = std::move(s);
	}
	if (const CompiledRule* r = uniqueRuleWhere(
			rs,
			[](const Triple& t) { return t.predicate == vocab::sdn("appInterface"); },
			"application interface")) {
		AppShape s{*r, {}, {}};
		const Triple& it = uniqueTriple(
			*r, [](const Triple& t) { return t.predicate == vocab::sdn("appInterface"); },
			"application interface triple");
		s.fVar = varName(it.subject, "application subject");
		const Triple& tt = uniqueTriple(
			*r, [](const Triple& t) { return t.predicate == vocab::sdn("appTenant"); },
			"application tenant triple");
		s.rVar = varName(tt.object, "application tenant");
		checkKeyedOn(*r, {s.fVar, s.rVar}, "application");
		out.app = std::move(s);
	}
	if (const CompiledRule* r = uniqueRuleWhere(
			rs, [](const Triple& t) { return t.predicate == vocab::sdn("flowFilter"); },
			"flow filter")) {
		FilterShape s;
		s.rule = *r;
		s.fVar = varName(
			uniqueTriple(*r,
				[](const Triple& t) { return t.predicate == vocab::sdn("flowFilter"); },
				"flow filter triple")
				.subject,
			"filter source");
		s.toVar = varName(
			uniqueTriple(*r,
				[](const Triple& t) {
					return t.predicate == vocab::sdn("interfaceNode") && t.object.isVariable();
				},
				"destination node triple")
				.object,
			"filter destination");
		s.srcVar = varName(
			uniqueTriple(*r,
				[](const Triple& t) { return t.predicate == vocab::sdn("srcIp"); },
				"source address triple")
				.object,
			"source address");
		s.dstVar = varName(
			uniqueTriple(*r,
				[](const Triple& t) { return t.predicate == vocab::sdn("dstIp"); },
				"destination address triple")
				.object,
			"destination address");
		s.clsVar = varName(
			uniqueTriple(*r,
				[&rdfType](const Triple& t) {
					return t.predicate == rdfType && t.object.isVariable();
				},
				"requirement class triple")
				.object,
			"requirement class");
		s.cVar = varName(
			uniqueTriple(*r,
				[](const Triple& t) { return t.predicate == vocab::clc("derivedFrom"); },
				"requirement provenance triple")
				.object,
			"constraint");
		const Triple& vt = uniqueTriple(
			*r, [](const Triple& t) { return t.predicate.isVariable(); },
			"requirement value triple");
		s.vpVar = vt.predicate.value();
		s.vVar = varName(vt.object, "requirement value");
		checkKeyedOn(s.rule,
			{s.fVar, s.toVar, s.srcVar, s.dstVar, s.clsVar, s.vpVar, s.vVar, s.cVar}, "filter");
		out.filter = std::move(s);
	}
	return out;
}

}  // namespace

std::vector<Triple> Translator::computeDirect(const Store& store,
	const std::vector<Triple>& staged, std::vector<SkippedConstraint>* skipped) const {
	Store view = store;
	view.insertBatch(staged);

	RuleSet rs = buildRuleSet();
	MirrorShapes shapes = extractShapes(rs);

	const Term rdfType = vocab::rdfType();
	const Term hasInteraction = vocab::rcp("hasInteraction");
	const Term hasConstraint = vocab::rcp("hasConstraint");
	const Term from = vocab::rcp("interactionFrom");
	const Term to = vocab::rcp("interactionTo");
	const Term offers = vocab::rcp("offers");
	const Term deviceAddress = vocab::rcp("deviceAddress");

	auto sortTerms = [](std::vector<Term>& ts) {
		std::sort(ts.begin(), ts.end(),
			[](const Term& a, const Term& b) { return termCompare(a, b) < 0; });
		ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
	};

	std::vector<Triple> out;
	auto fire = [&out](const CompiledRule& rule, const Binding& b) {
		std::vector<Triple> derived = instantiateConclusion(rule, b);
		out.insert(out.end(), std::make_move_iterator(derived.begin()),
			std::make_move_iterator(derived.end()));
	};

	// Tenant layer: recipes with an endpoint-complete constraint in one of
	// their interactions.
	std::set<Term> qualified;
	for (const Term& r : subjectsOf(view, rdfType, vocab::rcp("Recipe"))) {
		for (const Term& i : objectsOf(view, r, hasInteraction)) {
			for (const Term& c : objectsOf(view, i, hasConstraint)) {
				if (view.countMatches(Pattern{c, from, std::nullopt}) == 0) continue;
				if (view.countMatches(Pattern{c, to, std::nullopt}) == 0) continue;
				qualified.insert(r);
			}
		}
	}
	if (shapes.tenant) {
		for (const Term& r : qualified) {
			Binding b;
			if (!b.bind(shapes.tenant->rVar, r)) continue;
			fire(shapes.tenant->rule, b);
		}
	}

	// Application layer: source offerings of such constraints under each
	// tenant. Tenants derived above participate, as they would mid-fixpoint.
	if (shapes.app) {
		std::set<Term> tenants = shapes.tenant ? qualified : std::set<Term>{};
		for (const Term& r : subjectsOf(view, rdfType, vocab::sdn("Tenant"))) tenants.insert(r);
		std::set<std::pair<Term, Term>> apps;  // (offering, recipe)
		for (const Term& r : tenants) {
			for (const Term& i : objectsOf(view, r, hasInteraction)) {
				for (const Term& c : objectsOf(view, i, hasConstraint)) {
					std::vector<Term> fs = objectsOf(view, c, from);
					if (fs.empty()) continue;
					if (view.countMatches(Pattern{c, to, std::nullopt}) == 0) continue;
					for (const Term& f : fs) apps.emplace(f, r);
				}
			}
		}
		for (const auto& [f, r] : apps) {
			Binding b;
			if (!b.bind(shapes.app->fVar, f) || !b.bind(shapes.app->rVar, r)) continue;
			fire(shapes.app->rule, b);
		}
	}

	// Filter layer: every combination of source and destination offering,
	// device address and resolved value gets its own filter, exactly the
	// enumeration the filter rule performs.
	if (shapes.filter) {
		const FilterShape& sh = *shapes.filter;
		for (const TargetSpec& tgt : targets_) {
			for (const Term& c : subjectsOf(view, rdfType, tgt.constraintClass)) {
				std::vector<Term> fs = objectsOf(view, c, from);
				std::vector<Term> ts = objectsOf(view, c, to);
				if (fs.empty() || ts.empty()) continue;  // not yet instantiated

				// Value resolution draws on every device offering any source
				// endpoint, and on all of the constraint's own properties.
				std::vector<Term> fdevs;
				for (const Term& f : fs) {
					std::vector<Term> devs = subjectsOf(view, offers, f);
					fdevs.insert(fdevs.end(), devs.begin(), devs.end());
				}
				sortTerms(fdevs);
				Profile deviceProps = unionProfile(view, fdevs);
				Profile params = unionProfile(view, {c});

				std::vector<Term> values;
				try {
					for (const NumericValue& v : resolveAll(tgt.calc, deviceProps, params, c))
						values.push_back(formatNumeric(v));
				} catch (const UnresolvedReference& e) {
					if (skipped) skipped->push_back({c, e.reference});
					continue;
				}

				for (const Term& f : fs) {
					std::vector<Term> sdevs = subjectsOf(view, offers, f);
					if (sdevs.empty()) {
						if (skipped)
							skipped->push_back({c, "no device offers source " + f.debugString()});
						continue;
					}
					std::vector<Term> srcs;
					for (const Term& d : sdevs) {
						std::vector<Term> addrs = objectsOf(view, d, deviceAddress);
						srcs.insert(srcs.end(), addrs.begin(), addrs.end());
					}
					sortTerms(srcs);
					if (srcs.empty()) {
						if (skipped) skipped->push_back({c, "source device has no address"});
						continue;
					}
					for (const Term& t : ts) {
						std::vector<Term> tdevs = subjectsOf(view, offers, t);
						if (tdevs.empty()) {
							if (skipped)
								skipped->push_back(
									{c, "no device offers destination " + t.debugString()});
							continue;
						}
						std::vector<Term> dsts;
						for (const Term& d : tdevs) {
							std::vector<Term> addrs = objectsOf(view, d, deviceAddress);
							dsts.insert(dsts.end(), addrs.begin(), addrs.end());
						}
						sortTerms(dsts);
						if (dsts.empty()) {
							if (skipped)
								skipped->push_back({c, "destination device has no address"});
							continue;
						}
						for (const Term& src : srcs) {
							for (const Term& dst : dsts) {
								for (const Term& v : values) {
									Binding b;
									if (!b.bind(sh.fVar, f) || !b.bind(sh.toVar, t) ||
										!b.bind(sh.srcVar, src) || !b.bind(sh.dstVar, dst) ||
										!b.bind(sh.clsVar, tgt.producesClass) ||
										!b.bind(sh.vpVar, tgt.valueProperty) ||
										!b.bind(sh.vVar, v) || !b.bind(sh.cVar, c))
										continue;
									fire(sh.rule, b);
								}
							}
						}
					}
				}
			}
		}
	}

	std::sort(out.begin(), out.end());
	out.erase(std::unique(out.begin(), out.end()), out.end());
	std::vector<Triple> fresh;
	fresh.reserve(out.size());
	for (Triple& t : out) {
		if (!view.contains(t)) fresh.push_back(std::move(t));
	}
	return fresh;
}

std::vector<Triple> Translator::computeWithRules(const Store& store,
	const std::vector<Triple>& staged, const FixpointOptions& opts,
	FixpointReport* report) const {
	Store scratch = store;
	scratch.insertBatch(staged);
	for (std::size_t i = 0; i < packDocs_.size(); ++i)
		scratch.loadDocument(*packDocs_[i], "p" + packNames_[i]);
	std::size_t base = scratch.size();
	RuleSet rs = buildRuleSet();
	FixpointReport rep = fixpoint(scratch, rs, opts);
	if (report) *report = rep;
	return std::vector<Triple>(scratch.triples().begin() + base, scratch.triples().end());
}

std::vector<Triple> sdnSubgraph(const std::vector<Triple>& triples) {
	std::vector<Triple> out;
	for (const Triple& t : triples) {
		bool sdnPredicate = t.predicate.isIri() &&
			t.predicate.value().compare(0, ns::kSdn.size(), ns::kSdn) == 0;
		bool sdnType = t.predicate == vocab::rdfType() && t.object.isIri() &&
			t.object.value().compare(0, ns::kSdn.size(), ns::kSdn) == 0;
		if (sdnPredicate || sdnType) out.push_back(t);
	}
	std::sort(out.begin(), out.end());
	out.erase(std::unique(out.begin(), out.end()), out.end());
	return out;
}

TranslationReport Translator::translate(Store& store, EngineChoice engine,
	const std::vector<Triple>& staged, const FixpointOptions& opts) const {
	TranslationReport report;
	std::vector<Triple> outputs;
	switch (engine) {
		case EngineChoice::Direct:
			outputs = computeDirect(store, staged, &report.skipped);
			break;
		case EngineChoice::Rules:
			outputs = computeWithRules(store, staged, opts, &report.fixpoint);
			break;
		case EngineChoice::Both: {
			std::vector<Triple> direct = computeDirect(store, staged, &report.skipped);
			std::vector<Triple> rules = computeWithRules(store, staged, opts, &report.fixpoint);
			std::vector<Triple> baseline = store.triples();
			baseline.insert(baseline.end(), staged.begin(), staged.end());
			std::vector<Triple> a = baseline;
			a.insert(a.end(), direct.begin(), direct.end());
			std::vector<Triple> b = baseline;
			b.insert(b.end(), rules.begin(), rules.end());
			if (!isomorphic(sdnSubgraph(a), sdnSubgraph(b)))
				throw DivergenceError(
					"direct and rules translations disagree on the sdn subgraph");
			outputs = std::move(direct);
			break;
		}
	}
	for (const Triple& t : outputs) {
		if (t.predicate == vocab::clc("derivedFrom")) ++report.requirementsProduced;
	}
	std::vector<Triple> batch = staged;
	batch.insert(batch.end(), outputs.begin(), outputs.end());
	report.newTriples = store.insertBatch(batch);
	return report;
}

}  // namespace qosflow
