"""Chronicles: named, owned version histories over sets of contexts.

A version owns the contexts its script created; one of them is its final
context.  Version V depends directly on W when V owns a context whose parent
is owned by W.  No version may depend, even transitively, on a version of
its own chronicle, and a chronicle is up to date when its newest version
only depends on newest versions.
"""

from .errors import DependencyCycle, UnknownChronicle
from .refs import ContextRef


class ChronicleVersion:
    __slots__ = ("chronicle_key", "version_id", "owned", "final", "script",
                 "assignment")

    def __init__(self, chronicle_key, version_id, owned, final, script,
                 assignment):
        self.chronicle_key = chronicle_key  # (owner, name)
        self.version_id = version_id
        self.owned = frozenset(owned)
        self.final = final
        self.script = script
        self.assignment = dict(assignment)  # (owner, name) -> version_id

    @property
    def ident(self):
        return (self.chronicle_key, self.version_id)

    def __repr__(self):
        o, n = self.chronicle_key
        return f"ChronicleVersion({o}:{n}:{self.version_id})"


class Chronicle:
    __slots__ = ("owner", "name", "versions", "regeneration_failed")

    def __init__(self, owner, name, versions=(), regeneration_failed=False):
        self.owner = owner
        self.name = name
        self.versions = list(versions)  # newest first
        self.regeneration_failed = regeneration_failed

    @property
    def key(self):
        return (self.owner, self.name)

    @property
    def newest(self):
        return self.versions[0] if self.versions else None


class Chronicles:
    """Registry of all chronicles, backed by the entity store."""

    def __init__(self, store):
        self.store = store
        self.by_key = {}
        self._ctx_owner = {}  # ContextRef -> version ident
        self._load()

    # ----------------------------------------------------------- persistence

    def _load(self):
        for record in self.store.list_chronicles():
            c = self._from_record(record)
            self.by_key[c.key] = c
        self._reindex()

    def _from_record(self, record):
        key = (record["owner"], record["name"])
        versions = [
            ChronicleVersion(
                key,
                v["id"],
                [ContextRef.parse(r) for r in v["owned"]],
                ContextRef.parse(v["final"]),
                v["script"],
                {(a[0], a[1]): a[2] for a in v["assignment"]},
            )
            for v in record["versions"]
        ]
        return Chronicle(record["owner"], record["name"], versions,
                         record.get("failed", False))

    def _to_record(self, c):
        return {
            "v": 1,
            "owner": c.owner,
            "name": c.name,
            "failed": c.regeneration_failed,
            "versions": [
                {
                    "id": v.version_id,
                    "owned": sorted(str(r) for r in v.owned),
                    "final": str(v.final),
                    "script": v.script,
                    "assignment": sorted(
                        [o, n, vid] for (o, n), vid in v.assignment.items()
                    ),
                }
                for v in c.versions
            ],
        }

    def _save(self, c):
        self.store.put_chronicle(self._to_record(c))

    def _reindex(self):
        self._ctx_owner = {}
        for c in self.by_key.values():
            for v in c.versions:
                for ref in v.owned:
                    self._ctx_owner[ref] = v.ident

    # ---------------------------------------------------------------- lookup

    def get(self, owner, name):
        return self.by_key.get((owner, name))

    def require(self, owner, name):
        c = self.get(owner, name)
        if c is None:
            raise UnknownChronicle(f"no chronicle {owner}:{name}")
        return c

    def version(self, key, version_id):
        c = self.by_key.get(key)
        if c is None:
            return None
        for v in c.versions:
            if v.version_id == version_id:
                return v
        return None

    def all_chronicles(self):
        return sorted(self.by_key.values(), key=lambda c: c.key)

    def owning_version(self, ref):
        """Version ident owning this exact context, or None."""
        return self._ctx_owner.get(ref)

    def nearest_owned(self, ref):
        """Walk parents until hitting a context some version owns."""
        cur = ref
        while cur is not None:
            ident = self._ctx_owner.get(cur)
            if ident is not None:
                return ident
            record = self.store.load_context(cur)
            cur = record[5]
        return None

    # ------------------------------------------------------------ dependency

    def direct_dependencies(self, version):
        out = set()
        for ref in version.owned:
            record = self.store.load_context(ref)
            parent = record[5]
            if parent is None:
                continue
            ident = self.nearest_owned(parent)
            if ident is not None and ident != version.ident:
                out.add(ident)
        return out

    def all_dependencies(self, version):
        """Transitive closure of direct dependency, as version idents."""
        seen = set()
        frontier = [version]
        while frontier:
            v = frontier.pop()
            for ident in self.direct_dependencies(v):
                if ident not in seen:
                    seen.add(ident)
                    w = self.version(*ident)
                    if w is not None:
                        frontier.append(w)
        return seen

    def depends_on(self, v, w_ident):
        return w_ident in self.all_dependencies(v)

    def is_up_to_date(self, c):
        newest = c.newest
        if newest is None:
            return True
        for (key, vid) in self.all_dependencies(newest):
            other = self.by_key.get(key)
            if other is None or other.newest is None:
                return False
            if other.newest.version_id != vid:
                return False
        return True

    def status(self, c):
        return "upToDate" if self.is_up_to_date(c) else "outOfDate"

    # ----------------------------------------------------------------- guard

    def make_guard(self, creating_key):
        """Creation-time check: the context being created must not make the
        in-progress version depend on any version of its own chronicle."""

        def guard(parent_ref):
            ident = self.nearest_owned(parent_ref)
            if ident is None:
                return
            key, _vid = ident
            if key == creating_key:
                raise DependencyCycle(
                    f"{creating_key[0]}:{creating_key[1]} cannot depend on "
                    "its own chronicle"
                )
            w = self.version(*ident)
            if w is None:
                return
            for dep_key, _ in self.all_dependencies(w):
                if dep_key == creating_key:
                    raise DependencyCycle(
                        f"context parent would route a dependency back to "
                        f"{creating_key[0]}:{creating_key[1]}"
                    )

        return guard

    # ------------------------------------------------------------ publishing

    def register_version(self, owner, name, owned, final, script, assignment):
        key = (owner, name)
        c = self.by_key.get(key)
        if c is None:
            c = Chronicle(owner, name)
            self.by_key[key] = c
        vid = 1 if not c.versions else c.versions[0].version_id + 1
        version = ChronicleVersion(key, vid, owned, final, script, assignment)
        c.versions.insert(0, version)
        c.regeneration_failed = False
        for ref in version.owned:
            self._ctx_owner[ref] = version.ident
        self._save(c)
        return version

    def mark_failed(self, c):
        c.regeneration_failed = True
        self._save(c)

    # ---------------------------------------------------------------- repair

    def default_assignment(self):
        return {
            key: c.newest.version_id
            for key, c in self.by_key.items()
            if c.newest is not None
        }

    def stale(self):
        return [c for c in self.all_chronicles() if not self.is_up_to_date(c)]

    def _chronicle_deps(self, c):
        """Chronicle-level dependency keys of c's newest version."""
        newest = c.newest
        if newest is None:
            return set()
        return {key for key, _ in self.all_dependencies(newest)} - {c.key}

    def repair_sweep(self, runner):
        """Regenerate stale chronicles in dependency order.

        runner(chronicle, assignment) must re-run the newest script and
        return (owned_refs, final_ref) or raise.  Returns a report of what
        happened to each stale chronicle.
        """
        stale = {c.key: c for c in self.stale()}
        order = []
        remaining = dict(stale)
        while remaining:
            progressed = False
            for key in sorted(remaining):
                c = remaining[key]
                if not (self._chronicle_deps(c) & set(remaining)):
                    order.append(c)
                    del remaining[key]
                    progressed = True
                    break
            if not progressed:  # defensive: should be acyclic
                order.extend(remaining[k] for k in sorted(remaining))
                break
        report = {"regenerated": [], "failed": [], "checked": len(order)}
        for c in order:
            newest = c.newest
            if newest is None:
                continue
            assignment = self.default_assignment()
            try:
                owned, final = runner(c, assignment)
            except Exception as e:
                self.mark_failed(c)
                report["failed"].append(
                    {"owner": c.owner, "name": c.name, "error": str(e)}
                )
                continue
            self.register_version(
                c.owner, c.name, owned, final, newest.script, assignment
            )
            report["regenerated"].append({"owner": c.owner, "name": c.name})
        return report
