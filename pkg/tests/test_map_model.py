"""Map document parsing, serialization, validation, fixture, info levels."""

from __future__ import annotations

import random

import pytest

from corpus import random_document
from oracles import documents_equal
from tactmap.map_model import (
    A3_HEIGHT_MM,
    A3_WIDTH_MM,
    NO_FURTHER_INFO,
    DuplicateId,
    ElementKind,
    GeometryMismatch,
    InfoLayers,
    InvalidLevels,
    MalformedDocument,
    MapDocument,
    MapElement,
    MapProfileError,
    MissingName,
    MissingScale,
    OpenPolygon,
    OutOfCanvas,
    PointGeom,
    Polygon,
    Polyline,
    SelfIntersectingPolygon,
    Severity,
    UnknownElement,
    UnknownKind,
    ValidationRules,
    element_info,
    fixture_city_map,
    parse_map,
    serialize_map,
    validate_map,
)

MINIMAL = (
    '<svg xmlns="http://www.w3.org/2000/svg" width="420mm" height="297mm" '
    'data-scale-m-per-mm="2" data-title="t">{body}</svg>'
)


def doc_with(body: str) -> str:
    return MINIMAL.format(body=body)


class TestParse:
    def test_fixture_composition_counts(self):
        doc = parse_map(serialize_map(fixture_city_map()))
        assert len(doc.elements) == 19
        assert len(doc.elements_of_kind(ElementKind.STREET)) == 6
        assert len(doc.elements_of_kind(ElementKind.BUILDING)) == 6
        assert len(doc.elements_of_kind(ElementKind.POI)) == 6
        assert len(doc.elements_of_kind(ElementKind.WATER)) == 1

    def test_empty_document(self):
        doc = parse_map(doc_with(""))
        assert doc.elements == ()
        assert doc.scale_m_per_mm == 2.0
        assert doc.title == "t"

    def test_duplicate_id_rejected(self):
        body = (
            '<circle cx="10" cy="10" data-id="hotel" data-kind="poi" data-name="a"/>'
            '<circle cx="40" cy="40" data-id="hotel" data-kind="poi" data-name="b"/>'
        )
        with pytest.raises(DuplicateId):
            parse_map(doc_with(body))

    def test_bad_xml(self):
        with pytest.raises(MalformedDocument):
            parse_map("<svg data-scale-m-per-mm='1'")

    def test_missing_scale(self):
        with pytest.raises(MissingScale):
            parse_map('<svg xmlns="http://www.w3.org/2000/svg" width="420mm" height="297mm"/>')

    def test_unknown_kind(self):
        with pytest.raises(UnknownKind):
            parse_map(doc_with('<circle cx="1" cy="1" data-id="x" data-kind="volcano" data-name="v"/>'))

    def test_open_polygon(self):
        body = '<path d="M 10,10 L 30,10 L 30,30" data-id="b" data-kind="building" data-name="b"/>'
        with pytest.raises(OpenPolygon):
            parse_map(doc_with(body))

    def test_street_must_be_open(self):
        body = '<path d="M 10,10 L 30,10 L 30,30 Z" data-id="s" data-kind="street" data-name="s"/>'
        with pytest.raises(GeometryMismatch):
            parse_map(doc_with(body))

    def test_out_of_canvas(self):
        body = '<circle cx="500" cy="10" data-id="p" data-kind="poi" data-name="p"/>'
        with pytest.raises(OutOfCanvas):
            parse_map(doc_with(body))

    def test_self_intersecting_polygon(self):
        body = (
            '<path d="M 10,10 L 50,50 L 50,10 L 10,50 Z" '
            'data-id="bow" data-kind="building" data-name="bow"/>'
        )
        with pytest.raises(SelfIntersectingPolygon):
            parse_map(doc_with(body))

    def test_missing_name(self):
        body = '<circle cx="1" cy="1" data-id="p" data-kind="poi" data-name="  "/>'
        with pytest.raises(MissingName):
            parse_map(doc_with(body))

    def test_levels_must_start_at_one(self):
        body = (
            '<circle cx="1" cy="1" data-id="p" data-kind="poi" data-name="p" '
            'data-level-2="late"/>'
        )
        with pytest.raises(InvalidLevels):
            parse_map(doc_with(body))

    def test_level_gaps_allowed_after_one(self):
        body = (
            '<circle cx="1" cy="1" data-id="p" data-kind="poi" data-name="p" '
            'data-level-1="a" data-level-3="c"/>'
        )
        doc = parse_map(doc_with(body))
        assert doc.element("p").levels.entries == ((1, "a"), (3, "c"))

    def test_decoration_ignored(self):
        body = (
            '<rect x="0" y="0" width="10" height="10" fill="url(#hatch)"/>'
            '<g><path d="M 1,1 L 9,9" stroke="red"/></g>'
            '<circle cx="5" cy="5" data-id="p" data-kind="poi" data-name="p"/>'
        )
        doc = parse_map(doc_with(body))
        assert [el.id for el in doc.elements] == ["p"]

    def test_relative_path_commands(self):
        body = '<path d="m 10,10 l 20,0 l 0,20" data-id="s" data-kind="street" data-name="s"/>'
        doc = parse_map(doc_with(body))
        assert doc.element("s").vertices == ((10.0, 10.0), (30.0, 10.0), (30.0, 30.0))

    def test_curve_commands_rejected(self):
        body = '<path d="M 1,1 C 2,2 3,3 4,4" data-id="s" data-kind="street" data-name="s"/>'
        with pytest.raises(MalformedDocument):
            parse_map(doc_with(body))

    def test_missing_dimensions_default_to_a3(self):
        doc = parse_map('<svg xmlns="http://www.w3.org/2000/svg" data-scale-m-per-mm="1"/>')
        assert (doc.canvas_width_mm, doc.canvas_height_mm) == (A3_WIDTH_MM, A3_HEIGHT_MM)


class TestSerialize:
    def test_fixture_round_trip(self):
        doc = fixture_city_map()
        again = parse_map(serialize_map(doc))
        assert again == doc
        assert documents_equal(again, doc)

    def test_empty_map_minimal_profile(self):
        doc = MapDocument(100.0, 50.0, 1.5, (), "empty")
        text = serialize_map(doc)
        assert "<path" not in text and "<circle" not in text
        assert parse_map(text) == doc

    def test_levels_preserved_in_order(self):
        poi = MapElement(
            "p",
            ElementKind.POI,
            PointGeom(10.0, 10.0),
            "Well",
            InfoLayers(((1, "one"), (2, "two"), (4, "four"))),
        )
        doc = MapDocument(100.0, 100.0, 1.0, (poi,), "levels")
        again = parse_map(serialize_map(doc))
        assert documents_equal(again, doc)
        assert again.element("p").levels.entries == ((1, "one"), (2, "two"), (4, "four"))

    def test_attribute_escaping(self):
        poi = MapElement("p", ElementKind.POI, PointGeom(1.0, 1.0), 'Café "<&>"')
        doc = MapDocument(50.0, 50.0, 1.0, (poi,), title="a&b <c> \"d\" 'e'")
        again = parse_map(serialize_map(doc))
        assert again == doc

    def test_round_trip_100_random_documents(self):
        rng = random.Random(20260810)
        for _ in range(100):
            doc = random_document(rng)
            again = parse_map(serialize_map(doc))
            assert again == doc, "round trip must be exact"
            assert documents_equal(again, doc)


class TestParserTotality:
    """Any input yields either a valid document or exactly one profile error."""

    def test_fuzzed_mutations(self):
        rng = random.Random(99)
        base = serialize_map(fixture_city_map())
        for _ in range(200):
            text = base
            for _ in range(rng.randint(1, 3)):
                pos = rng.randrange(len(text))
                op = rng.random()
                if op < 0.4:
                    text = text[:pos] + text[pos + 1 :]
                elif op < 0.8:
                    text = text[:pos] + rng.choice('<>"=Zz19-') + text[pos:]
                else:
                    text = text[:pos] + text[pos:][::-1]
            try:
                doc = parse_map(text)
            except MapProfileError:
                continue
            assert not [
                i for i in validate_map(doc) if i.severity == Severity.ERROR
            ], "parser must never return an invariant-violating document"

    def test_generated_documents_parse_clean(self):
        rng = random.Random(7)
        for _ in range(50):
            doc = random_document(rng)
            parsed = parse_map(serialize_map(doc))
            for el in parsed.elements:
                if el.kind == ElementKind.STREET:
                    assert isinstance(el.geometry, Polyline) and len(el.vertices) >= 2
                elif el.kind == ElementKind.POI:
                    assert isinstance(el.geometry, PointGeom)
                else:
                    assert isinstance(el.geometry, Polygon) and len(el.vertices) >= 3


class TestValidate:
    def test_fixture_passes_default_rules(self):
        assert validate_map(fixture_city_map()) == []

    def test_line_separation_warning(self):
        streets = tuple(
            MapElement(f"s{i}", ElementKind.STREET, Polyline(((10.0, y), (90.0, y))), f"S{i}")
            for i, y in enumerate((50.0, 51.0))
        )
        doc = MapDocument(100.0, 100.0, 1.0, streets)
        issues = validate_map(doc, ValidationRules(min_line_separation_mm=3.0))
        assert [i.code for i in issues] == ["line-separation"]
        assert issues[0].severity == Severity.WARNING

    def test_crossing_streets_are_exempt(self):
        streets = (
            MapElement("h", ElementKind.STREET, Polyline(((10.0, 50.0), (90.0, 50.0))), "H"),
            MapElement("v", ElementKind.STREET, Polyline(((50.0, 10.0), (50.0, 90.0))), "V"),
        )
        doc = MapDocument(100.0, 100.0, 1.0, streets)
        assert validate_map(doc) == []

    def test_symbol_clearance_warning(self):
        building = MapElement(
            "b", ElementKind.BUILDING, Polygon(((10.0, 10.0), (30.0, 10.0), (30.0, 30.0), (10.0, 30.0))), "B"
        )
        poi = MapElement("p", ElementKind.POI, PointGeom(32.0, 20.0), "P")
        doc = MapDocument(100.0, 100.0, 1.0, (building, poi))
        issues = validate_map(doc, ValidationRules(min_symbol_clearance_mm=4.0))
        assert [i.code for i in issues] == ["symbol-clearance"]
        assert issues[0].element_id == "p"

    def test_street_width_warning(self):
        stub = MapElement("s", ElementKind.STREET, Polyline(((10.0, 10.0), (10.5, 10.0))), "Stub")
        doc = MapDocument(100.0, 100.0, 1.0, (stub,))
        issues = validate_map(doc, ValidationRules(min_street_width_mm=1.0))
        assert [i.code for i in issues] == ["street-width"]

    def test_invariant_violations_are_errors(self):
        bad = MapDocument(
            100.0,
            100.0,
            1.0,
            (
                MapElement("x", ElementKind.POI, PointGeom(10.0, 10.0), "A"),
                MapElement("x", ElementKind.POI, PointGeom(200.0, 10.0), ""),
            ),
        )
        issues = validate_map(bad)
        codes = {i.code for i in issues if i.severity == Severity.ERROR}
        assert {"duplicate-id", "missing-name", "out-of-canvas"} <= codes

    def test_determinism(self):
        rng = random.Random(3)
        for _ in range(20):
            doc = random_document(rng)
            first = validate_map(doc)
            second = validate_map(doc)
            assert first == second


class TestFixture:
    def test_has_hotel_named_hotel(self):
        doc = fixture_city_map()
        hotel = doc.element("hotel")
        assert hotel.kind == ElementKind.POI
        assert hotel.name.lower() == "hotel"

    def test_all_pois_have_two_info_levels(self):
        for poi in fixture_city_map().elements_of_kind(ElementKind.POI):
            assert len(poi.levels.entries) >= 2, poi.id

    def test_no_validation_errors(self):
        assert validate_map(fixture_city_map()) == []


class TestElementInfo:
    def test_level_zero_is_name(self):
        assert element_info(fixture_city_map(), "hotel", 0) == "Hotel"

    def test_missing_level_falls_back(self):
        text = element_info(fixture_city_map(), "hotel", 99)
        assert text == f"Hotel ({NO_FURTHER_INFO})"

    def test_unknown_element(self):
        with pytest.raises(UnknownElement):
            element_info(fixture_city_map(), "ghost", 0)

    def test_present_level_text(self):
        doc = fixture_city_map()
        assert element_info(doc, "hotel", 2) == "rooms from 80 euros per night"
