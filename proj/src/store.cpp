#include "qosflow/store.hpp"

#include <algorithm>
#include <functional>

#include "qosflow/graph_iso.hpp"

namespace qosflow {

VariableInData::VariableInData(const Triple& t)
	: std::runtime_error("variable in asserted data: " + t.subject.debugString() + " " +
		  t.predicate.debugString() + " " + t.object.debugString()),
	  triple(t) {}

const Term* Binding::lookup(const std::string& name) const {
	auto it = map_.find(name);
	return it == map_.end() ? nullptr : &it->second;
}

bool Binding::bind(const std::string& name, const Term& value) {
	auto [it, inserted] = map_.emplace(name, value);
	return inserted || it->second == value;
}

bool Binding::operator<(const Binding& other) const {
	auto ia = map_.begin(), ib = other.map_.begin();
	for (; ia != map_.end() && ib != other.map_.end(); ++ia, ++ib) {
		if (ia->first != ib->first) return ia->first < ib->first;
		int c = termCompare(ia->second, ib->second);
		if (c) return c < 0;
	}
	return map_.size() < other.map_.size();
}

Term substituteTerm(const Term& t, const Binding& b) {
	if (t.isGround()) return t;
	if (t.isVariable()) {
		const Term* v = b.lookup(t.value());
		return v ? *v : t;
	}
	if (t.isList()) {
		std::vector<Term> elems;
		elems.reserve(t.elements().size());
		for (const Term& e : t.elements()) elems.push_back(substituteTerm(e, b));
		return Term::list(std::move(elems));
	}
	return t;
}

Triple substituteTriple(const Triple& t, const Binding& b) {
	return Triple{substituteTerm(t.subject, b), substituteTerm(t.predicate, b),
		substituteTerm(t.object, b)};
}

bool unifyTerm(const Term& pattern, const Term& value, Binding& b) {
	if (pattern.isVariable()) return b.bind(pattern.value(), value);
	if (pattern.isGround()) return pattern == value;
	// Non-ground list: unify elementwise.
	if (pattern.isList()) {
		if (!value.isList()) return false;
		const auto& pe = pattern.elements();
		const auto& ve = value.elements();
		if (pe.size() != ve.size()) return false;
		for (std::size_t i = 0; i < pe.size(); ++i) {
			if (!unifyTerm(pe[i], ve[i], b)) return false;
		}
		return true;
	}
	return false;
}

bool unifyTriple(const Triple& pattern, const Triple& value, Binding& b) {
	return unifyTerm(pattern.subject, value.subject, b) &&
		unifyTerm(pattern.predicate, value.predicate, b) &&
		unifyTerm(pattern.object, value.object, b);
}

namespace {

bool matchesPattern(const Triple& t, const Pattern& p) {
	if (p.subject && !(*p.subject == t.subject)) return false;
	if (p.predicate && !(*p.predicate == t.predicate)) return false;
	if (p.object && !(*p.object == t.object)) return false;
	return true;
}

}  // namespace

std::size_t Store::insertBatch(const std::vector<Triple>& batch) {
	for (const Triple& t : batch) {
		if (!t.subject.isGround() || !t.predicate.isGround() || !t.object.isGround())
			throw VariableInData(t);
	}
	std::uint64_t gen = generation_ + 1;
	std::size_t added = 0;
	for (const Triple& t : batch) {
		auto [it, inserted] = ids_.emplace(t, static_cast<std::uint32_t>(triples_.size()));
		if (!inserted) continue;
		std::uint32_t id = it->second;
		triples_.push_back(t);
		gens_.push_back(gen);
		spo_[t.subject][t.predicate].push_back(id);
		pos_[t.predicate][t.object].push_back(id);
		osp_[t.object][t.subject].push_back(id);
		++added;
	}
	if (added > 0) generation_ = gen;
	return added;
}

std::uint64_t Store::generationOf(const Triple& t) const {
	auto it = ids_.find(t);
	return it == ids_.end() ? 0 : gens_[it->second];
}

std::vector<Triple> Store::matchLimit(const Pattern& p, std::size_t limit) const {
	limit = std::min(limit, triples_.size());
	std::vector<std::uint32_t> ids;
	auto addBucket = [&](const Bucket& b) {
		for (std::uint32_t id : b) {
			if (id < limit) ids.push_back(id);
		}
	};
	auto addInner = [&](const Index& index, const Term& outer, const Term* innerKey) {
		auto it = index.find(outer);
		if (it == index.end()) return;
		if (innerKey) {
			auto jt = it->second.find(*innerKey);
			if (jt != it->second.end()) addBucket(jt->second);
		} else {
			for (const auto& [k, bucket] : it->second) addBucket(bucket);
		}
	};
	bool s = p.subject.has_value(), pr = p.predicate.has_value(), o = p.object.has_value();
	if (s && pr) {
		addInner(spo_, *p.subject, &*p.predicate);
	} else if (pr && o) {
		addInner(pos_, *p.predicate, &*p.object);
	} else if (s && o) {
		addInner(osp_, *p.object, &*p.subject);
	} else if (s) {
		addInner(spo_, *p.subject, nullptr);
	} else if (pr) {
		addInner(pos_, *p.predicate, nullptr);
	} else if (o) {
		addInner(osp_, *p.object, nullptr);
	} else {
		for (std::uint32_t id = 0; id < limit; ++id) ids.push_back(id);
	}
	std::vector<Triple> out;
	out.reserve(ids.size());
	for (std::uint32_t id : ids) {
		if (matchesPattern(triples_[id], p)) out.push_back(triples_[id]);
	}
	std::sort(out.begin(), out.end());
	return out;
}

std::size_t Store::countLimit(const Pattern& p, std::size_t limit) const {
	// Same index walk as matchLimit without materializing.
	limit = std::min(limit, triples_.size());
	std::size_t n = 0;
	auto countBucket = [&](const Bucket& b, bool filter) {
		for (std::uint32_t id : b) {
			if (id < limit && (!filter || matchesPattern(triples_[id], p))) ++n;
		}
	};
	bool s = p.subject.has_value(), pr = p.predicate.has_value(), o = p.object.has_value();
	bool all = s && pr && o;
	auto walk = [&](const Index& index, const Term& outer, const Term* innerKey, bool filter) {
		auto it = index.find(outer);
		if (it == index.end()) return;
		if (innerKey) {
			auto jt = it->second.find(*innerKey);
			if (jt != it->second.end()) countBucket(jt->second, filter);
		} else {
			for (const auto& [k, bucket] : it->second) countBucket(bucket, filter);
		}
	};
	if (s && pr) {
		walk(spo_, *p.subject, &*p.predicate, all);
	} else if (pr && o) {
		walk(pos_, *p.predicate, &*p.object, false);
	} else if (s && o) {
		walk(osp_, *p.object, &*p.subject, false);
	} else if (s) {
		walk(spo_, *p.subject, nullptr, false);
	} else if (pr) {
		walk(pos_, *p.predicate, nullptr, false);
	} else if (o) {
		walk(osp_, *p.object, nullptr, false);
	} else {
		n = limit;
	}
	return n;
}

std::vector<Triple> Store::match(const Pattern& p) const { return matchLimit(p, triples_.size()); }

std::size_t Store::countMatches(const Pattern& p) const { return countLimit(p, triples_.size()); }

std::vector<Triple> Store::matchVia(IndexKind kind, const Pattern& p) const {
	std::vector<std::uint32_t> ids;
	auto addAll = [&](const Index& index, const std::optional<Term>& outer,
		const std::optional<Term>& inner) {
		if (outer) {
			auto it = index.find(*outer);
			if (it == index.end()) return;
			if (inner) {
				auto jt = it->second.find(*inner);
				if (jt != it->second.end())
					for (std::uint32_t id : jt->second) ids.push_back(id);
			} else {
				for (const auto& [k, bucket] : it->second)
					for (std::uint32_t id : bucket) ids.push_back(id);
			}
		} else {
			// Primary key unbound: degenerate to a scan.
			for (std::uint32_t id = 0; id < triples_.size(); ++id) ids.push_back(id);
		}
	};
	switch (kind) {
		case IndexKind::Spo: addAll(spo_, p.subject, p.predicate); break;
		case IndexKind::Pos: addAll(pos_, p.predicate, p.object); break;
		case IndexKind::Osp: addAll(osp_, p.object, p.subject); break;
	}
	std::vector<Triple> out;
	for (std::uint32_t id : ids) {
		if (matchesPattern(triples_[id], p)) out.push_back(triples_[id]);
	}
	std::sort(out.begin(), out.end());
	out.erase(std::unique(out.begin(), out.end()), out.end());
	return out;
}

namespace {

Pattern groundPositions(const Triple& t) {
	Pattern p;
	if (t.subject.isGround()) p.subject = t.subject;
	if (t.predicate.isGround()) p.predicate = t.predicate;
	if (t.object.isGround()) p.object = t.object;
	return p;
}

}  // namespace

std::vector<Binding> Store::matchGraph(const Graph& pattern) const {
	std::vector<Triple> atoms(pattern.begin(), pattern.end());
	std::vector<bool> used(atoms.size(), false);
	std::vector<Binding> results;

	std::function<void(const Binding&, std::size_t)> step = [&](const Binding& binding,
		std::size_t remaining) {
		if (remaining == 0) {
			results.push_back(binding);
			return;
		}
		// Most selective next: smallest exact match count after substitution.
		std::size_t best = atoms.size();
		std::size_t bestCount = 0;
		Triple bestSub;
		for (std::size_t i = 0; i < atoms.size(); ++i) {
			if (used[i]) continue;
			Triple sub = substituteTriple(atoms[i], binding);
			std::size_t count = countMatches(groundPositions(sub));
			if (best == atoms.size() || count < bestCount) {
				best = i;
				bestCount = count;
				bestSub = sub;
			}
		}
		used[best] = true;
		for (const Triple& cand : match(groundPositions(bestSub))) {
			Binding next = binding;
			if (unifyTriple(bestSub, cand, next)) step(next, remaining - 1);
		}
		used[best] = false;
	};

	step(Binding{}, atoms.size());
	std::sort(results.begin(), results.end());
	results.erase(std::unique(results.begin(), results.end()), results.end());
	return results;
}

Snapshot Store::snapshot() const { return Snapshot(this, triples_.size(), generation_); }

bool Snapshot::contains(const Triple& t) const {
	auto it = store_->ids_.find(t);
	return it != store_->ids_.end() && it->second < count_;
}

std::vector<Triple> Snapshot::match(const Pattern& p) const {
	return store_->matchLimit(p, count_);
}

std::size_t Snapshot::countMatches(const Pattern& p) const {
	return store_->countLimit(p, count_);
}

std::size_t Store::loadDocument(const Document& doc, const std::string& docTag,
	bool renameBlanks) {
	if (!renameBlanks) return insertBatch(doc.triples);
	std::string tag = docTag;
	for (char& c : tag) {
		bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
			c == '_';
		if (!ok) c = '_';  // keep minted labels serializable
	}
	std::map<std::string, std::string> mapping;
	for (const std::string& label : blankLabels(doc.triples))
		mapping[label] = "g" + tag + "_" + label;
	return insertBatch(relabelBlanks(doc.triples, mapping));
}

}  // namespace qosflow
