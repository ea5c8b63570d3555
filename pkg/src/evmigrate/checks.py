"""Randomized oracles for the command laws and the round-trip guarantee.

Each case gets its own RNG derived from ``master seed + case index``, so a
failing case N under seed S replays exactly as case 0 under seed S+N.
Transcripts contain no timing, which keeps repeated runs byte-identical.

Law boundaries honoured by the generators:
  - overwrite pairs are fully specified (every field present) and their
    ownerIds point at pre-seeded persons; UNSET fields skip writes rather
    than clearing, so a partial second command is not an overwrite, and a
    dangling ownerId would leave a stub the single-command run lacks;
  - commutativity sets use pairwise-distinct target ids (stub creation is
    order-insensitive, so ownerIds there may point anywhere).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .commands import HAVE_DOG, HAVE_PERSON, have_dog, have_person
from .editor import Editor
from .errors import MigrationError
from .metamodel import InstanceModel, KIND_INT, copy_model, model_equals
from .sync import SCENARIOS, MigrationSession, migrate_backward, migrate_forward

_NAME_ALPHABET = "abcdefghijklmnopqrstuvwxyzABCDEFGH 0123456789-_:"

LAWS = ("overwrite", "commutativity", "roundtrip")


@dataclass
class LawReport:
    law: str
    cases: int
    failures: int
    first_failure: str | None = None

    @property
    def passed(self) -> bool:
        return self.failures == 0


def _case_rng(law, seed, index) -> random.Random:
    return random.Random(f"{law}:{seed + index}")


def random_name(rng) -> str:
    n = rng.randint(0, 10)
    return "".join(rng.choice(_NAME_ALPHABET) for _ in range(n)).strip()


def random_model(rng, schema, max_objects=8) -> InstanceModel:
    """A random valid instance model for any schema: attributes present
    with probability 0.8, single references with 0.7."""
    model = InstanceModel(schema)
    class_names = list(schema.classes)
    counts: dict[str, int] = {}
    if class_names:
        for _ in range(rng.randint(0, max_objects)):
            cname = rng.choice(class_names)
            counts[cname] = counts.get(cname, 0) + 1
            obj = model.new_object(cname, f"{cname.lower()}_{counts[cname]}")
            for adef in schema.cls(cname).attributes.values():
                if rng.random() < 0.8:
                    value = rng.randint(0, 150) if adef.kind == KIND_INT else random_name(rng)
                    model.set_attribute(obj, adef.name, value)
    for obj in model.objects.values():
        for rdef in schema.cls(obj.class_name).references.values():
            pool = [o.id for o in model.objects.values() if o.class_name == rdef.target]
            if not pool:
                continue
            if rdef.many:
                for target in rng.sample(pool, k=rng.randint(0, min(2, len(pool)))):
                    model.set_reference(obj, rdef.name, target)
            elif rng.random() < 0.7:
                model.set_reference(obj, rdef.name, rng.choice(pool))
    return model


_PERSON_POOL = ["p1", "p2", "px1", "px2", "px3", "px4"]
_DOG_POOL = ["d1", "d2", "dx1", "dx2", "dx3", "dx4"]


def _variant_schemas():
    return [
        SCENARIOS["identity"].m1_schema,
        SCENARIOS["ybirth"].m2_schema,
        SCENARIOS["dog-no-age"].m2_schema,
    ]


def seed_commands(rng, owners=("p1", "p2"), dogs=("d1", "d2")):
    """Base population: 2 persons + 2 dogs, every field present."""
    cmds = [have_person(p, name=random_name(rng), age=rng.randint(0, 150)) for p in owners]
    cmds += [
        have_dog(d, owner_id=rng.choice(owners), name=random_name(rng), age=rng.randint(0, 150))
        for d in dogs
    ]
    return cmds


def _full_command(rng, kind, target_id, owners):
    name = random_name(rng)
    age = rng.randint(0, 150)
    if kind == HAVE_PERSON:
        return have_person(target_id, name=name, age=age)
    return have_dog(target_id, owner_id=rng.choice(owners), name=name, age=age)


def _partial_command(rng, kind, target_id, owner_pool):
    name = random_name(rng) if rng.random() < 0.7 else None
    age = rng.randint(0, 150) if rng.random() < 0.7 else None
    if kind == HAVE_PERSON:
        return have_person(target_id, name=name, age=age)
    owner = rng.choice(owner_pool) if rng.random() < 0.7 else None
    return have_dog(target_id, owner_id=owner, name=name, age=age)


def _seeded_editor(schema, seed_cmds) -> Editor:
    ed = Editor(schema)
    for cmd in seed_cmds:
        ed.execute(cmd)
    return ed


def overwrite_case(rng, schema=None) -> bool:
    """run(c1); run(c2) must equal run(c2) for same-id, same-kind pairs."""
    if schema is None:
        schema = rng.choice(_variant_schemas())
    seeds = seed_commands(rng)
    kind = rng.choice((HAVE_PERSON, HAVE_DOG))
    pool = _PERSON_POOL if kind == HAVE_PERSON else _DOG_POOL
    target_id = rng.choice(pool)
    c1 = _full_command(rng, kind, target_id, owners=("p1", "p2"))
    c2 = _full_command(rng, kind, target_id, owners=("p1", "p2"))
    both = _seeded_editor(schema, seeds)
    both.execute(c1)
    both.execute(c2)
    only_second = _seeded_editor(schema, seeds)
    only_second.execute(c2)
    return model_equals(both.model, only_second.model) and both.store == only_second.store


def random_distinct_commands(rng, size):
    """Commands with pairwise-distinct target ids, partial fields allowed."""
    persons = _PERSON_POOL + [f"py{i}" for i in range(len(_PERSON_POOL), size)]
    dogs = _DOG_POOL + [f"dy{i}" for i in range(len(_DOG_POOL), size)]
    owner_pool = list(persons)
    rng.shuffle(persons)
    rng.shuffle(dogs)
    cmds = []
    for _ in range(size):
        if persons and (not dogs or rng.random() < 0.5):
            cmds.append(_partial_command(rng, HAVE_PERSON, persons.pop(), owner_pool))
        else:
            cmds.append(_partial_command(rng, HAVE_DOG, dogs.pop(), owner_pool))
    return cmds


def commutativity_case(rng, size, n_orders=None, schema=None) -> bool:
    """Every execution order of a distinct-id command set must produce the
    same model and store.  ``n_orders=None`` means exhaustive."""
    if schema is None:
        schema = rng.choice(_variant_schemas())
    seeds = seed_commands(rng)
    cmds = random_distinct_commands(rng, size)
    if n_orders is None:
        orders = list(itertools.permutations(cmds))
    else:
        orders = [cmds]
        for _ in range(max(0, n_orders - 1)):
            shuffled = cmds[:]
            rng.shuffle(shuffled)
            orders.append(shuffled)
    reference = None
    for order in orders:
        ed = _seeded_editor(schema, seeds)
        for cmd in order:
            ed.execute(cmd)
        if reference is None:
            reference = ed
        elif not (model_equals(ed.model, reference.model) and ed.store == reference.store):
            return False
    return True


def roundtrip_case(rng, scenario=None) -> bool:
    """Forward then backward with no modification reproduces the input."""
    if scenario is None:
        scenario = SCENARIOS[rng.choice(sorted(SCENARIOS))]
    model = random_model(rng, scenario.m1_schema)
    snapshot = copy_model(model)
    session = MigrationSession.create(scenario.m1_schema, scenario.m2_schema)
    migrate_forward(session, model)
    result = migrate_backward(session)
    return model_equals(result, snapshot)


def _run_law(law, case_fn, seed, cases) -> LawReport:
    failures = 0
    first = None
    for i in range(cases):
        rng = _case_rng(law, seed, i)
        try:
            ok = case_fn(rng)
        except MigrationError:
            ok = False
        if not ok:
            failures += 1
            if first is None:
                first = f"case {i} (replay: --cases 1 --seed {seed + i})"
    return LawReport(law, cases, failures, first)


def check_overwrite(seed, cases) -> LawReport:
    return _run_law("overwrite", overwrite_case, seed, cases)


def check_commutativity(seed, cases, max_commands=5, n_orders=6) -> LawReport:
    def case(rng):
        return commutativity_case(rng, rng.randint(1, max_commands), n_orders=n_orders)

    return _run_law("commutativity", case, seed, cases)


def check_roundtrip(seed, cases) -> LawReport:
    return _run_law("roundtrip", roundtrip_case, seed, cases)


def run_all(seed, cases, max_commands=5) -> list[LawReport]:
    return [
        check_overwrite(seed, cases),
        check_commutativity(seed, cases, max_commands=max_commands),
        check_roundtrip(seed, cases),
    ]
