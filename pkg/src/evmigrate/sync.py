"""End-to-end migration orchestration between two editors.

Forward: adopt the source model, parse it into commands, ship the encoded
log, merge on the target.  Backward: re-parse the (possibly externally
modified) target model, merge the new commands into the target's own
store, ship, merge on the source.  Shipping always goes through the wire
text even in-process, so the serialized path stays exercised.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .codec import decode_log, encode_log
from .commands import DEFAULT_REFERENCE_YEAR
from .editor import Editor
from .errors import FormatError, ModelError
from .metamodel import InstanceModel, KIND_INT, MetaModel, load_schema


@dataclass
class Scenario:
    """A named pair of schemas to migrate between."""

    name: str
    m1_schema: MetaModel
    m2_schema: MetaModel
    notes: str = ""


BASE_SCHEMA_TEXT = """\
class Person
  attr name string
  attr age int
class Dog
  attr name string
  attr age int
  ref owner -> Person one
"""

YBIRTH_SCHEMA_TEXT = """\
class Person
  attr name string
  attr ybirth int
class Dog
  attr name string
  attr age int
  ref owner -> Person one
"""

DOG_NO_AGE_SCHEMA_TEXT = """\
class Person
  attr name string
  attr age int
class Dog
  attr name string
  ref owner -> Person one
"""


def _base_schema(name="m1"):
    return load_schema(BASE_SCHEMA_TEXT, name=name)


SCENARIOS: dict[str, Scenario] = {
    "identity": Scenario(
        "identity",
        _base_schema(),
        _base_schema("m2"),
        notes="both sides use the same schema",
    ),
    "ybirth": Scenario(
        "ybirth",
        _base_schema(),
        load_schema(YBIRTH_SCHEMA_TEXT, name="m2"),
        notes="target stores year of birth instead of age",
    ),
    "dog-no-age": Scenario(
        "dog-no-age",
        _base_schema(),
        load_schema(DOG_NO_AGE_SCHEMA_TEXT, name="m2"),
        notes="target drops the dog's age attribute",
    ),
}


@dataclass
class MigrationSession:
    """Two editors plus the shared reference year; transcripts of the wire
    texts are kept for inspection."""

    m1: Editor
    m2: Editor
    reference_year: int = DEFAULT_REFERENCE_YEAR
    transcripts: list[str] = field(default_factory=list)

    @classmethod
    def create(cls, m1_schema, m2_schema, reference_year=DEFAULT_REFERENCE_YEAR):
        return cls(
            Editor(m1_schema, reference_year),
            Editor(m2_schema, reference_year),
            reference_year,
        )

    @classmethod
    def for_scenario(cls, name, reference_year=DEFAULT_REFERENCE_YEAR):
        try:
            scenario = SCENARIOS[name]
        except KeyError:
            raise ModelError(
                f"unknown scenario {name!r} (have: {', '.join(sorted(SCENARIOS))})"
            ) from None
        return cls.create(scenario.m1_schema, scenario.m2_schema, reference_year)


def _ship(session: MigrationSession, sender: Editor, receiver: Editor) -> str:
    text = encode_log(sender.store, session.reference_year)
    doc = decode_log(text)
    if doc.reference_year != receiver.reference_year:
        raise FormatError(
            f"log uses reference year {doc.reference_year}, "
            f"receiver expects {receiver.reference_year}"
        )
    receiver.merge_all(doc.commands)
    session.transcripts.append(text)
    return text


def migrate_forward(session: MigrationSession, m1_input: InstanceModel) -> InstanceModel:
    """Adopt the input on m1, parse it, ship the log to m2; returns m2's model."""
    session.m1.adopt_model(m1_input)
    session.m1.parse_model()
    _ship(session, session.m1, session.m2)
    return session.m2.model


def migrate_backward(session: MigrationSession) -> InstanceModel:
    """Re-parse m2's (possibly modified) model and ship the updated log
    back to m1; returns m1's model."""
    session.m2.parse_model()
    _ship(session, session.m2, session.m1)
    return session.m1.model


def apply_mutations(model: InstanceModel, script: str):
    """Apply a mutation script directly to a model, bypassing commands.

    One mutation per line, `#` comments allowed:
      set <id> <attr> <value>
      new <Class> <id>
      link <id> <ref> <targetId>
    """
    schema = model.schema
    for lineno, raw in enumerate(script.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split(None, 3)
        op = tokens[0]
        if op == "set":
            if len(tokens) < 3:
                raise FormatError("expected 'set <id> <attr> <value>'", line=lineno)
            obj_id, attr = tokens[1], tokens[2]
            value = tokens[3].strip() if len(tokens) == 4 else ""
            obj = model.get(obj_id)
            if obj is None:
                raise ModelError(f"line {lineno}: unknown object id {obj_id!r}")
            adef = schema.cls(obj.class_name).attributes.get(attr)
            if adef is None:
                raise ModelError(
                    f"line {lineno}: class {obj.class_name} has no attribute {attr!r}"
                )
            if adef.kind == KIND_INT:
                try:
                    parsed = int(value, 10)
                except ValueError:
                    raise ModelError(
                        f"line {lineno}: attribute {attr!r} expects an integer, got {value!r}"
                    ) from None
                model.set_attribute(obj, attr, parsed)
            else:
                model.set_attribute(obj, attr, value)
        elif op == "new":
            if len(tokens) != 3:
                raise FormatError("expected 'new <Class> <id>'", line=lineno)
            class_name, obj_id = tokens[1], tokens[2]
            if not schema.has_class(class_name):
                raise ModelError(f"line {lineno}: unknown class {class_name!r}")
            model.new_object(class_name, obj_id)
        elif op == "link":
            if len(tokens) != 4:
                raise FormatError("expected 'link <id> <ref> <targetId>'", line=lineno)
            obj_id, ref, target_id = tokens[1], tokens[2], tokens[3].strip()
            obj = model.get(obj_id)
            if obj is None:
                raise ModelError(f"line {lineno}: unknown object id {obj_id!r}")
            rdef = schema.cls(obj.class_name).references.get(ref)
            if rdef is None:
                raise ModelError(
                    f"line {lineno}: class {obj.class_name} has no reference {ref!r}"
                )
            target = model.get(target_id)
            if target is None:
                raise ModelError(f"line {lineno}: unknown target id {target_id!r}")
            if target.class_name != rdef.target:
                raise ModelError(
                    f"line {lineno}: target {target_id!r} is a {target.class_name}, "
                    f"expected {rdef.target}"
                )
            model.set_reference(obj, ref, target_id)
        else:
            raise FormatError(f"unknown mutation {op!r}", line=lineno)
