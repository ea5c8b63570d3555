"""Editors: schema + instance model + event store + id registries.

An editor executes commands, merges incoming command sets, and parses a
bare object model back into the commands that would reproduce it.  The
event store keeps exactly one command per target id; a newer command for
an id replaces the older one after executing.
"""

from __future__ import annotations

from . import commands as _commands
from .commands import (
    HAVE_DOG,
    HAVE_PERSON,
    Command,
    check_reference_year,
    DEFAULT_REFERENCE_YEAR,
    have_dog,
    have_person,
)
from .errors import MergeError, MigrationError, ModelError
from .metamodel import DynamicObject, InstanceModel, MetaModel

#: canonical command ordering: persons before dogs, then by id
_KIND_RANK = {HAVE_PERSON: 0, HAVE_DOG: 1}


def command_sort_key(cmd: Command):
    return (_KIND_RANK[cmd.kind], cmd.id)


class EventStore:
    """Commands keyed by target object id; a set, no observable order."""

    def __init__(self):
        self._entries: dict[str, Command] = {}

    def __len__(self):
        return len(self._entries)

    def __eq__(self, other):
        if not isinstance(other, EventStore):
            return NotImplemented
        return self._entries == other._entries

    def get(self, obj_id) -> Command | None:
        return self._entries.get(obj_id)

    def put(self, cmd: Command):
        self._entries[cmd.id] = cmd

    def commands(self) -> list[Command]:
        """Snapshot in canonical (kind, id) order."""
        return sorted(self._entries.values(), key=command_sort_key)

    def snapshot(self) -> dict[str, Command]:
        return dict(self._entries)


class Editor:
    """One side of a migration: executes, merges, parses.

    Per-class registries map ids to live objects in both directions; they
    are what makes getOrCreate idempotent and what lets parsing recover
    the id of an object seen before.
    """

    def __init__(self, schema: MetaModel, reference_year=DEFAULT_REFERENCE_YEAR):
        self.schema = schema
        self.reference_year = check_reference_year(reference_year)
        self.model = InstanceModel(schema)
        self.store = EventStore()
        self._objects_by_id: dict[str, dict[str, DynamicObject]] = {}
        self._id_of_object: dict[DynamicObject, str] = {}
        self._class_of_id: dict[str, str] = {}
        self._id_counters: dict[str, int] = {}

    # -- registry -----------------------------------------------------

    def _register(self, class_name, obj_id, obj):
        owner = self._class_of_id.get(obj_id)
        if owner is not None and owner != class_name:
            raise ModelError(
                f"id {obj_id!r} already registered for class {owner}, "
                f"cannot reuse it for {class_name}"
            )
        self._objects_by_id.setdefault(class_name, {})[obj_id] = obj
        self._id_of_object[obj] = obj_id
        self._class_of_id[obj_id] = class_name

    def registered_id(self, obj) -> str | None:
        return self._id_of_object.get(obj)

    def get_or_create(self, class_name, obj_id) -> DynamicObject:
        """Return the registered object for (class, id), creating a fresh
        all-UNSET object on first sight.  Calling it repeatedly with one
        id always yields the same object."""
        by_id = self._objects_by_id.get(class_name)
        if by_id is not None:
            obj = by_id.get(obj_id)
            if obj is not None:
                return obj
        owner = self._class_of_id.get(obj_id)
        if owner is not None:
            raise ModelError(
                f"id {obj_id!r} already belongs to class {owner}, requested {class_name}"
            )
        obj = self.model.new_object(class_name, obj_id)
        self._register(class_name, obj_id, obj)
        return obj

    def id_for(self, obj: DynamicObject) -> str:
        """Registered id of a model object, minting a fresh one if absent.

        Fresh ids are `<lowercased class><counter>` with per-class counters
        starting at 1, skipping anything already registered or present in
        the model."""
        known = self._id_of_object.get(obj)
        if known is not None:
            return known
        if self.model.objects.get(obj.id) is not obj:
            raise ModelError(f"object {obj.id!r} does not belong to this editor's model")
        prefix = obj.class_name.lower()
        counter = self._id_counters.get(obj.class_name, 1)
        fresh = f"{prefix}{counter}"
        while fresh in self._class_of_id or fresh in self.model.objects:
            counter += 1
            fresh = f"{prefix}{counter}"
        self._id_counters[obj.class_name] = counter + 1
        self._register(obj.class_name, fresh, obj)
        return fresh

    # -- execution ----------------------------------------------------

    def execute(self, cmd: Command) -> str:
        """Run the command, then insert/replace its store entry."""
        _commands.run(cmd, self)
        self.store.put(cmd)
        return cmd.id

    def merge_all(self, incoming):
        """Execute incoming commands in deterministic (class, id) order.

        Order does not affect the outcome for distinct-id sets, but a
        fixed order keeps transcripts reproducible.  The first failing
        command aborts the merge."""
        batch = sorted(incoming, key=lambda c: (c.target_class, c.id))
        for cmd in batch:
            try:
                self.execute(cmd)
            except MigrationError as e:
                raise MergeError(
                    f"merge failed on {cmd.kind} id={cmd.id!r}: {e}", command=cmd
                ) from e

    # -- adoption -----------------------------------------------------

    def adopt_model(self, model: InstanceModel):
        """Take ownership of an externally built model.

        Resets store and registries, validates the objects against this
        editor's schema, and registers every object under its own id."""
        probe = InstanceModel(self.schema)
        probe.objects = model.objects
        probe.validate()
        model.schema = self.schema
        self.model = model
        self.store = EventStore()
        self._objects_by_id = {}
        self._id_of_object = {}
        self._class_of_id = {}
        self._id_counters = {}
        for obj in model.objects.values():
            self._register(obj.class_name, obj.id, obj)

    # -- parsing ------------------------------------------------------

    def parse_model(self) -> list[Command]:
        """Derive and execute the commands that reproduce the current model.

        Visits Persons first, then Dogs (registered objects in registry
        insertion order, then unregistered ones in model order), executes
        each derived command, and returns the resulting store contents."""
        persons: list[DynamicObject] = []
        dogs: list[DynamicObject] = []
        for class_name, bucket in (("Person", persons), ("Dog", dogs)):
            registered = self._objects_by_id.get(class_name, {})
            bucket.extend(registered.values())
            for obj in self.model.objects.values():
                if obj.class_name == class_name and obj not in self._id_of_object:
                    bucket.append(obj)
        claimed = len(persons) + len(dogs)
        if claimed != len(self.model.objects):
            for obj in self.model.objects.values():
                if obj.class_name not in ("Person", "Dog"):
                    raise ModelError(
                        f"cannot parse object {obj.id!r} of class {obj.class_name!r}"
                    )
        for obj in persons:
            self.execute(self.parse_person(obj))
        for obj in dogs:
            self.execute(self.parse_dog(obj))
        return self.store.commands()

    def _parse_common(self, obj):
        attrs = self.schema.cls(obj.class_name).attributes
        name = obj.attributes.get("name") if "name" in attrs else None
        age = None
        if "age" in attrs and obj.attributes.get("age") is not None:
            age = obj.attributes["age"]
        elif "ybirth" in attrs and obj.attributes.get("ybirth") is not None:
            age = self.reference_year - obj.attributes["ybirth"]
        return name, age

    def parse_person(self, obj: DynamicObject) -> Command:
        name, age = self._parse_common(obj)
        return have_person(self.id_for(obj), name=name, age=age)

    def parse_dog(self, obj: DynamicObject) -> Command:
        dog_id = self.id_for(obj)
        cls = self.schema.cls("Dog")
        name = obj.attributes.get("name") if "name" in cls.attributes else None
        if "age" in cls.attributes:
            age = obj.attributes.get("age")
        else:
            # The schema variant dropped the attribute; recover the value
            # from the command that produced this dog, if there is one.
            old = self.store.get(dog_id)
            age = old.age if old is not None and old.kind == HAVE_DOG else None
        owner_id = None
        if "owner" in cls.references:
            target_id = obj.references.get("owner")
            if target_id is not None:
                owner_id = self.id_for(self.model.objects[target_id])
        return have_dog(dog_id, owner_id=owner_id, name=name, age=age)
