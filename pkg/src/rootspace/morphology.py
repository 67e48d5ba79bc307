"""Alphabet-generic root-and-pattern morphology engine.

Words are built by filling the numbered slots of a template with the
consonants of a root; the inverse operation reads the root back out of a
surface string. The engine is parameterized by an :class:`Alphabet` so the
same machinery runs on Hebrew letters and on toy test alphabets.

Template inventory file format (UTF-8, tab-separated, ``#`` comments)::

    id  pos  pattern  arities  templatic  ambiguity  flags

``pattern`` uses ``{i}`` for the i-th root slot, every other character run
is fixed material. One line describes one arity variant; variants of the
same template share an ``id``. Empty optional fields are written ``-``.
The ``flags`` field is a ``;``-separated list of:

* ``plural=+SUFFIX`` or ``plural=PATTERN`` - plural form of a noun
* ``metathesis``                            - swap the fixed dental with a
                                              sibilant first root consonant
* ``rootverb``                              - member of the five root-derived
                                              verb infinitive templates
* ``denom=ID|ID``                           - denominal verb templates fed by
                                              this nominal template
* ``infl=TAG:PATTERN|TAG:PATTERN``          - inflection table of a verb
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from .errors import DataError

__all__ = [
    "Alphabet",
    "Root",
    "Template",
    "TemplateInventory",
    "SurfaceForm",
    "Pos",
    "AmbiguityClass",
    "apply_template",
    "extract_roots",
    "denominal_root",
    "pluralize",
    "inflect",
    "ambiguity_of",
    "load_inventory",
    "save_inventory",
    "parse_pattern",
    "format_pattern",
    "hebrew_alphabet",
    "latin_alphabet",
    "ArityMismatch",
    "UnknownLetter",
    "NoTemplaticConsonant",
    "NoPluralPattern",
    "InventoryError",
]


class MorphologyError(DataError):
    pass


class ArityMismatch(MorphologyError):
    pass


class UnknownLetter(MorphologyError):
    pass


class NoTemplaticConsonant(MorphologyError):
    pass


class NoPluralPattern(MorphologyError):
    pass


class InventoryError(MorphologyError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class Pos(str, Enum):
    NOUN = "noun"
    ADJECTIVE = "adjective"
    VERB_INFINITIVE = "verb_infinitive"
    VERB_INFLECTED = "verb_inflected"


class AmbiguityClass(str, Enum):
    UNAMBIGUOUS = "unambiguous"
    IMPERATIVE_HOMOGRAPH = "imperative_homograph"
    PRESENT_OR_DENOMINAL_HOMOGRAPH = "present_or_denominal_homograph"
    DENOMINAL_PAST_HOMOGRAPH = "denominal_past_homograph"


class Alphabet:
    """Letter inventory with word-final variants and a sibilant class.

    ``letters`` are the base symbols (unicode strings, length >= 1, so
    digraph alphabets work). ``final_form_map`` maps a base letter to the
    variant it takes word-finally. ``sibilants`` is the subset of letters
    that trigger metathesis in flagged templates.
    """

    def __init__(self, letters, final_form_map=None, sibilants=()):
        self.letters = tuple(letters)
        self.final_form_map = dict(final_form_map or {})
        self.sibilants = frozenset(sibilants)
        letterset = set(self.letters)
        if len(letterset) != len(self.letters):
            raise ValueError("duplicate letters in alphabet")
        for base, final in self.final_form_map.items():
            if base not in letterset:
                raise ValueError(f"final-form key {base!r} not a letter")
            if base == final:
                raise ValueError(f"letter {base!r} maps to itself")
        if not self.sibilants <= letterset:
            raise ValueError("sibilants must be alphabet letters")
        self._base_of = {v: k for k, v in self.final_form_map.items()}
        # longest-first so digraphs win over their prefixes
        self._symbols = sorted(
            letterset | set(self.final_form_map.values()), key=len, reverse=True
        )

    def segment(self, text: str) -> tuple[str, ...]:
        """Split ``text`` into letters, greedy longest match."""
        out = []
        i = 0
        while i < len(text):
            for sym in self._symbols:
                if text.startswith(sym, i):
                    out.append(sym)
                    i += len(sym)
                    break
            else:
                raise UnknownLetter(f"cannot segment {text!r} at position {i}")
        return tuple(out)

    def to_base(self, letter: str) -> str:
        return self._base_of.get(letter, letter)

    def finalize(self, letters) -> tuple[str, ...]:
        """Base forms everywhere, final variant on the last letter."""
        base = [self.to_base(c) for c in letters]
        if base and base[-1] in self.final_form_map:
            base[-1] = self.final_form_map[base[-1]]
        return tuple(base)

    def normalize(self, text: str) -> str:
        """Canonical spelling of ``text``; idempotent."""
        return "".join(self.finalize(self.segment(text)))

    def __contains__(self, letter: str) -> bool:
        return letter in self.letters or letter in self._base_of


def hebrew_alphabet() -> Alphabet:
    """Unvocalized Hebrew: 22 base letters, 5 final forms, 4 sibilants."""
    return Alphabet(
        letters="אבגדהוזחטיכלמנסעפצקרשת",
        final_form_map={"כ": "ך", "מ": "ם", "נ": "ן", "פ": "ף", "צ": "ץ"},
        sibilants="זסצש",
    )


def latin_alphabet() -> Alphabet:
    """a-z toy alphabet used by fixtures; s/z act as sibilants."""
    return Alphabet(letters="abcdefghijklmnopqrstuvwxyz", sibilants="sz")


ALPHABETS = {"hebrew": hebrew_alphabet, "latin": latin_alphabet}


@dataclass(frozen=True)
class Root:
    """Ordered root consonants, 2 to 4 of them."""

    consonants: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "consonants", tuple(self.consonants))
        if not 2 <= len(self.consonants) <= 4:
            raise ValueError(f"root must have 2-4 consonants, got {self.consonants!r}")

    def __len__(self):
        return len(self.consonants)

    @property
    def text(self) -> str:
        return "".join(self.consonants)


# A pattern segment is either a fixed letter (str) or a slot index (int >= 1).
Segment = "str | int"


def _check_slots(segments, arity, context):
    slots = [s for s in segments if isinstance(s, int)]
    if not slots:
        raise InventoryError(f"{context}: pattern has no slots")
    if slots != sorted(slots) or len(set(slots)) != len(slots):
        raise InventoryError(f"{context}: slot indices must strictly increase")
    if slots != list(range(1, arity + 1)):
        raise InventoryError(f"{context}: slots must cover 1..{arity} exactly")


@dataclass(frozen=True)
class PatternVariant:
    """One arity's worth of pattern data for a template."""

    arity: int
    segments: tuple
    plural_segments: tuple | None = None
    inflections: tuple = ()  # ((tag, segments), ...)


@dataclass(frozen=True)
class Template:
    id: str
    pos: Pos
    variants: dict  # arity -> PatternVariant
    templatic_consonants: frozenset = frozenset()
    ambiguity_class: AmbiguityClass = AmbiguityClass.UNAMBIGUOUS
    metathesis: bool = False
    alphabet: Alphabet = None

    def __post_init__(self):
        for arity, var in self.variants.items():
            _check_slots(var.segments, arity, self.id)
            for tag, segs in var.inflections:
                _check_slots(segs, arity, f"{self.id}:{tag}")
        for letter in self.templatic_consonants:
            fixed = {
                s
                for var in self.variants.values()
                for s in var.segments
                if isinstance(s, str)
            }
            if letter not in fixed:
                raise InventoryError(
                    f"{self.id}: templatic consonant {letter!r} not in pattern"
                )

    @property
    def arities(self) -> frozenset:
        return frozenset(self.variants)

    def variant(self, arity: int) -> PatternVariant:
        try:
            return self.variants[arity]
        except KeyError:
            raise ArityMismatch(
                f"template {self.id} supports arities {sorted(self.variants)}, got {arity}"
            ) from None


@dataclass(frozen=True)
class SurfaceForm:
    """A generated word together with its (template, root) provenance."""

    text: str
    template: Template | None = None
    root: Root | None = None

    @property
    def analysis(self):
        return (self.template.id if self.template else None, self.root)


@dataclass
class TemplateInventory:
    templates: dict  # id -> Template, in file order
    denominal_map: dict = field(default_factory=dict)  # nominal id -> (verb ids,)
    root_verb_ids: tuple = ()

    def __post_init__(self):
        for nid, vids in self.denominal_map.items():
            if nid not in self.templates:
                raise InventoryError(f"denominal map source {nid!r} unknown")
            for vid in vids:
                if vid not in self.templates:
                    raise InventoryError(f"denominal target {vid!r} unknown")
                if self.templates[vid].pos is not Pos.VERB_INFINITIVE:
                    raise InventoryError(f"denominal target {vid!r} is not an infinitive")
        if len(self.root_verb_ids) != 5:
            raise InventoryError(
                f"expected exactly 5 root-verb templates, got {len(self.root_verb_ids)}"
            )
        for vid in self.root_verb_ids:
            if self.templates[vid].pos is not Pos.VERB_INFINITIVE:
                raise InventoryError(f"root-verb template {vid!r} is not an infinitive")

    @property
    def nominal_templates(self):
        return [
            t for t in self.templates.values() if t.pos in (Pos.NOUN, Pos.ADJECTIVE)
        ]

    @property
    def root_verb_templates(self):
        return [self.templates[i] for i in self.root_verb_ids]


def _fill(segments, root: Root, alphabet: Alphabet, metathesis: bool):
    """Fill slots; returns the letter list after optional metathesis.

    Metathesis swaps the first slot-filled letter with the fixed letter
    immediately before it when that slot letter is a sibilant (the
    hitpael-type t/sibilant swap).
    """
    letters = []
    origins = []  # True where the letter came from a slot
    for seg in segments:
        if isinstance(seg, int):
            letters.append(root.consonants[seg - 1])
            origins.append(True)
        else:
            letters.append(seg)
            origins.append(False)
    if metathesis:
        for i, is_slot in enumerate(origins):
            if is_slot:
                if i > 0 and not origins[i - 1] and letters[i] in alphabet.sibilants:
                    letters[i - 1], letters[i] = letters[i], letters[i - 1]
                break
    return letters


def _build(segments, root, template) -> str:
    alphabet = template.alphabet
    for c in root.consonants:
        if c not in alphabet.letters:
            raise UnknownLetter(f"root consonant {c!r} outside the alphabet")
    letters = _fill(segments, root, alphabet, template.metathesis)
    return "".join(alphabet.finalize(letters))


def apply_template(root: Root, template: Template) -> SurfaceForm:
    """Fill ``template``'s slots with ``root``; word-final forms applied."""
    variant = template.variant(len(root))
    return SurfaceForm(_build(variant.segments, root, template), template, root)


def _segments_for_form(variant: PatternVariant, form: str | None):
    if form is None:
        return variant.segments
    if form == "plural":
        return variant.plural_segments
    for tag, segs in variant.inflections:
        if tag == form:
            return segs
    return None


def extract_roots(word: str, template: Template, form: str | None = None) -> list[Root]:
    """All roots whose application to ``template`` reproduces ``word``.

    No parse is an empty list. ``form`` selects an inflection tag or
    ``"plural"`` instead of the main pattern.
    """
    alphabet = template.alphabet
    normalized = alphabet.normalize(word)
    base = [alphabet.to_base(c) for c in alphabet.segment(normalized)]
    found = []

    def try_match(segments, letters):
        if len(letters) != len(segments):
            return None
        out = {}
        for seg, letter in zip(segments, letters):
            if isinstance(seg, int):
                out[seg] = letter
            elif seg != letter:
                return None
        return Root(tuple(out[i] for i in sorted(out)))

    for arity in sorted(template.variants):
        variant = template.variants[arity]
        segments = _segments_for_form(variant, form)
        if segments is None:
            continue
        candidates = []
        root = try_match(segments, base)
        if root is not None:
            candidates.append(root)
        if template.metathesis:
            # invert the swap: sibilant then fixed dental in the surface
            slot_pos = next(
                (i for i, s in enumerate(segments) if isinstance(s, int)), None
            )
            if slot_pos is not None and slot_pos > 0 and slot_pos < len(base):
                unswapped = list(base)
                unswapped[slot_pos - 1], unswapped[slot_pos] = (
                    unswapped[slot_pos],
                    unswapped[slot_pos - 1],
                )
                root = try_match(segments, unswapped)
                if root is not None and root.consonants[0] in alphabet.sibilants:
                    candidates.append(root)
        for root in candidates:
            try:
                rebuilt = _build(segments, root, template)
            except UnknownLetter:
                continue
            if rebuilt == normalized and root not in found:
                found.append(root)
    return found


def denominal_root(noun: SurfaceForm) -> Root:
    """Augmented root: base root plus the noun template's templatic consonant.

    The consonant is inserted where the noun's surface puts it - before the
    root if the template prefixes it, after if it suffixes it.
    """
    template = noun.template
    if template is None or noun.root is None:
        raise NoTemplaticConsonant("noun has no template analysis")
    variant = template.variant(len(noun.root))
    slots_before = 0
    for seg in variant.segments:
        if isinstance(seg, int):
            slots_before += 1
        elif seg in template.templatic_consonants:
            cons = list(noun.root.consonants)
            cons.insert(slots_before, seg)
            return Root(tuple(cons))
    raise NoTemplaticConsonant(f"template {template.id} has no templatic consonant")


def pluralize(noun: SurfaceForm) -> str:
    """Plural surface string of a generated noun."""
    variant = noun.template.variant(len(noun.root))
    if variant.plural_segments is None:
        raise NoPluralPattern(f"template {noun.template.id} has no plural pattern")
    return _build(variant.plural_segments, noun.root, noun.template)


def inflect(root: Root, template: Template) -> list[tuple[str, str]]:
    """All inflected surface forms listed in the template's table."""
    if template.pos not in (Pos.VERB_INFINITIVE, Pos.VERB_INFLECTED):
        raise ArityMismatch(f"template {template.id} is not verbal")
    variant = template.variant(len(root))
    return [(tag, _build(segs, root, template)) for tag, segs in variant.inflections]


def ambiguity_of(template: Template) -> AmbiguityClass:
    return template.ambiguity_class


# ---------------------------------------------------------------------------
# inventory file I/O


def parse_pattern(text: str, alphabet: Alphabet):
    """``"t{1}{2}i{3}"`` -> ('t', 1, 2, 'i', 3); fixed letters stored base-form."""
    segments = []
    i = 0
    while i < len(text):
        if text[i] == "{":
            j = text.index("}", i)
            segments.append(int(text[i + 1 : j]))
            i = j + 1
        else:
            j = text.find("{", i)
            if j == -1:
                j = len(text)
            for letter in alphabet.segment(text[i:j]):
                segments.append(alphabet.to_base(letter))
            i = j
    return tuple(segments)


def format_pattern(segments) -> str:
    return "".join(f"{{{s}}}" if isinstance(s, int) else s for s in segments)


def _parse_flags(raw, pattern_segments, alphabet, context):
    plural = None
    inflections = []
    metathesis = False
    rootverb = False
    denom = ()
    if raw and raw != "-":
        for entry in raw.split(";"):
            entry = entry.strip()
            if entry == "metathesis":
                metathesis = True
            elif entry == "rootverb":
                rootverb = True
            elif entry.startswith("plural="):
                value = entry[len("plural=") :]
                if value.startswith("+"):
                    suffix = tuple(
                        alphabet.to_base(c) for c in alphabet.segment(value[1:])
                    )
                    plural = pattern_segments + suffix
                else:
                    plural = parse_pattern(value, alphabet)
            elif entry.startswith("denom="):
                denom = tuple(entry[len("denom=") :].split("|"))
            elif entry.startswith("infl="):
                for item in entry[len("infl=") :].split("|"):
                    tag, _, pat = item.partition(":")
                    if not pat:
                        raise InventoryError(f"{context}: bad inflection {item!r}")
                    inflections.append((tag, parse_pattern(pat, alphabet)))
            else:
                raise InventoryError(f"{context}: unknown flag {entry!r}")
    return plural, tuple(inflections), metathesis, rootverb, denom


def load_inventory(path, alphabet: Alphabet) -> TemplateInventory:
    """Read a template inventory file; see the module docstring for format."""
    rows = []
    text = Path(path).read_text(encoding="utf-8")
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        fields = line.rstrip("\n").split("\t")
        if len(fields) != 7:
            raise InventoryError(f"expected 7 fields, got {len(fields)}", line=lineno)
        rows.append((lineno, fields))
    if not rows:
        raise InventoryError("no template rows")

    grouped = {}  # id -> list of per-variant dicts
    order = []
    denominal_map = {}
    root_verb_ids = []
    for lineno, (tid, pos, pattern, arity, templatic, ambiguity, flags) in rows:
        context = f"{tid} (line {lineno})"
        try:
            pos_val = Pos(pos)
        except ValueError:
            raise InventoryError(f"unknown pos {pos!r}", line=lineno) from None
        try:
            amb_val = AmbiguityClass(ambiguity)
        except ValueError:
            raise InventoryError(f"unknown ambiguity {ambiguity!r}", line=lineno) from None
        segments = parse_pattern(pattern, alphabet)
        arity_val = int(arity)
        templ = (
            frozenset(alphabet.to_base(c) for c in alphabet.segment(templatic))
            if templatic != "-"
            else frozenset()
        )
        plural, inflections, metathesis, rootverb, denom = _parse_flags(
            flags, segments, alphabet, context
        )
        if tid not in grouped:
            grouped[tid] = []
            order.append(tid)
        grouped[tid].append(
            dict(
                pos=pos_val,
                segments=segments,
                arity=arity_val,
                templatic=templ,
                ambiguity=amb_val,
                plural=plural,
                inflections=inflections,
                metathesis=metathesis,
            )
        )
        if denom:
            denominal_map[tid] = denom
        if rootverb and tid not in root_verb_ids:
            root_verb_ids.append(tid)

    templates = {}
    for tid in order:
        variants = {}
        first = grouped[tid][0]
        for row in grouped[tid]:
            for key in ("pos", "templatic", "ambiguity", "metathesis"):
                if row[key] != first[key]:
                    raise InventoryError(f"{tid}: variants disagree on {key}")
            if row["arity"] in variants:
                raise InventoryError(f"{tid}: duplicate arity {row['arity']}")
            variants[row["arity"]] = PatternVariant(
                arity=row["arity"],
                segments=row["segments"],
                plural_segments=row["plural"],
                inflections=row["inflections"],
            )
        templates[tid] = Template(
            id=tid,
            pos=first["pos"],
            variants=variants,
            templatic_consonants=first["templatic"],
            ambiguity_class=first["ambiguity"],
            metathesis=first["metathesis"],
            alphabet=alphabet,
        )
    return TemplateInventory(
        templates=templates,
        denominal_map=denominal_map,
        root_verb_ids=tuple(root_verb_ids),
    )


def save_inventory(inventory: TemplateInventory, path) -> None:
    """Write an inventory back out; load(save(x)) == x field for field."""
    lines = []
    for tid, template in inventory.templates.items():
        for arity in sorted(template.variants):
            var = template.variants[arity]
            flags = []
            if var.plural_segments is not None:
                flags.append("plural=" + format_pattern(var.plural_segments))
            if template.metathesis:
                flags.append("metathesis")
            if tid in inventory.root_verb_ids:
                flags.append("rootverb")
            if tid in inventory.denominal_map:
                flags.append("denom=" + "|".join(inventory.denominal_map[tid]))
            if var.inflections:
                flags.append(
                    "infl="
                    + "|".join(f"{tag}:{format_pattern(s)}" for tag, s in var.inflections)
                )
            lines.append(
                "\t".join(
                    [
                        tid,
                        template.pos.value,
                        format_pattern(var.segments),
                        str(arity),
                        "".join(sorted(template.templatic_consonants)) or "-",
                        template.ambiguity_class.value,
                        ";".join(flags) or "-",
                    ]
                )
            )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
