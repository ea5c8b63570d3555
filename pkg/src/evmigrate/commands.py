"""The shared editing vocabulary: HavePerson and HaveDog.

Both editors understand the same two commands; each editor executes them
against its own schema, querying at runtime which attributes exist.  A
command field left as None is UNSET: the corresponding write is skipped
(it never clears an existing value).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

from .errors import ModelError, SchemaError
from .metamodel import KIND_INT, KIND_STRING

if TYPE_CHECKING:
    from .editor import Editor

HAVE_PERSON = "HavePerson"
HAVE_DOG = "HaveDog"
KINDS = (HAVE_PERSON, HAVE_DOG)

#: class each command kind targets
TARGET_CLASS = {HAVE_PERSON: "Person", HAVE_DOG: "Dog"}

DEFAULT_REFERENCE_YEAR = 2020


def check_reference_year(year):
    if not isinstance(year, int) or isinstance(year, bool) or year <= 0:
        raise ValueError(f"reference year must be a positive integer, got {year!r}")
    return year


@dataclass(frozen=True)
class Command:
    """Immutable edit operation; the unit of storage, exchange and replay."""

    kind: str
    id: str
    name: str | None = None
    age: int | None = None
    owner_id: str | None = None  # HaveDog only

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown command kind {self.kind!r}")
        if not self.id:
            raise ValueError("command id must be non-empty")
        if self.owner_id is not None and self.kind != HAVE_DOG:
            raise ValueError("ownerId is only valid on HaveDog")

    @property
    def target_class(self) -> str:
        return TARGET_CLASS[self.kind]


def have_person(obj_id, name=None, age=None) -> Command:
    return Command(HAVE_PERSON, obj_id, name=name, age=age)


def have_dog(obj_id, owner_id=None, name=None, age=None) -> Command:
    return Command(HAVE_DOG, obj_id, name=name, age=age, owner_id=owner_id)


def command_equals(a: Command, b: Command) -> bool:
    return a == b


def _fill_attributes(editor: Editor, obj, name, age):
    # Writes are gated twice: on the command field being set and on the
    # schema declaring the attribute.  When the schema carries ybirth, the
    # age parameter is stored as referenceYear - age instead of (or in
    # addition to) a plain age.  Writes go straight to the attribute map;
    # declaredness is checked here and kinds are pinned by the checks.
    attrs = editor.schema.cls(obj.class_name).attributes
    values = obj.attributes
    if name is not None:
        adef = attrs.get("name")
        if adef is not None:
            if adef.kind != KIND_STRING:
                raise ModelError(f"{obj.class_name}.name is declared {adef.kind}, cannot hold a string")
            values["name"] = name
    if age is not None:
        adef = attrs.get("age")
        if adef is not None:
            if adef.kind != KIND_INT:
                raise ModelError(f"{obj.class_name}.age is declared {adef.kind}, cannot hold an int")
            values["age"] = age
        adef = attrs.get("ybirth")
        if adef is not None:
            if adef.kind != KIND_INT:
                raise ModelError(f"{obj.class_name}.ybirth is declared {adef.kind}, cannot hold an int")
            values["ybirth"] = editor.reference_year - age


def run_have_person(cmd: Command, editor: Editor) -> str:
    if not editor.schema.has_class("Person"):
        raise SchemaError("schema declares no Person class")
    person = editor.get_or_create("Person", cmd.id)
    _fill_attributes(editor, person, cmd.name, cmd.age)
    return cmd.id


def run_have_dog(cmd: Command, editor: Editor) -> str:
    if not editor.schema.has_class("Dog"):
        raise SchemaError("schema declares no Dog class")
    dog = editor.get_or_create("Dog", cmd.id)
    _fill_attributes(editor, dog, cmd.name, cmd.age)
    if cmd.owner_id is not None:
        ref = editor.schema.cls("Dog").references.get("owner")
        if ref is not None:
            # Owner may not exist yet; materialize a stub so dogs can be
            # executed before their owner's HavePerson arrives.
            owner = editor.get_or_create(ref.target, cmd.owner_id)
            editor.model.set_reference(dog, "owner", owner.id)
    return cmd.id


def run(cmd: Command, editor: Editor) -> str:
    """Execute a command against an editor's model (no store update)."""
    if cmd.kind == HAVE_PERSON:
        return run_have_person(cmd, editor)
    return run_have_dog(cmd, editor)
