import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ovation.lexicons import (
    ARPABET,
    CategoryLexicon,
    LexiconParseError,
    load_category_lexicon_file,
    load_emotion_lexicon,
    load_name_set,
    load_phonetic_dict,
    lookup_phonemes,
    match_token,
    strip_stress,
)


class TestPhoneticDict:
    def test_basic_entry(self):
        d = load_phonetic_dict(["CAT  K AE1 T"])
        assert lookup_phonemes(d, "cat") == ("K", "AE", "T")

    def test_alternates_appended_primary_first(self):
        d = load_phonetic_dict(["READ  R IY1 D", "READ(2)  R EH1 D"])
        assert d.entries["READ"] == (("R", "IY", "D"), ("R", "EH", "D"))
        assert lookup_phonemes(d, "Read") == ("R", "IY", "D")

    def test_comments_and_blanks_skipped(self):
        d = load_phonetic_dict([";;; a comment", "", "DOG  D AO1 G"])
        assert len(d) == 1

    def test_lookup_out_of_vocabulary(self):
        d = load_phonetic_dict(["CAT  K AE1 T"])
        assert lookup_phonemes(d, "zzxqv") is None

    def test_malformed_line_names_line_number(self):
        with pytest.raises(LexiconParseError, match="line 2"):
            load_phonetic_dict(["CAT  K AE1 T", "JUSTAWORD"])

    def test_unknown_phoneme_rejected(self):
        with pytest.raises(LexiconParseError, match="line 1"):
            load_phonetic_dict(["CAT  K QX1 T"])

    def test_no_stored_phoneme_carries_stress(self, bundle):
        for prons in bundle.phonetic.entries.values():
            for pron in prons:
                for ph in pron:
                    assert not ph[-1].isdigit()
                    assert ph in ARPABET

    def test_strip_stress_idempotent(self):
        for ph in ("AH0", "AH1", "AH2", "AH", "K", "NG"):
            once = strip_stress(ph)
            assert strip_stress(once) == once


class TestCategoryLexicon:
    def test_prefix_term(self):
        (lex,) = load_category_lexicon_file(["thank*\tgratitude"])
        assert lex.category_name == "gratitude"
        assert lex.prefix_terms == {"thank"}
        assert lex.exact_terms == frozenset()

    def test_exact_terms_grouped(self):
        (lex,) = load_category_lexicon_file([
            "i\tfirst_person_singular",
            "my\tfirst_person_singular",
        ])
        assert lex.exact_terms == {"i", "my"}

    def test_certainty_terms(self):
        (lex,) = load_category_lexicon_file(["always\tcertainty", "never\tcertainty"])
        assert lex.exact_terms == {"always", "never"}

    def test_order_of_first_appearance(self):
        lexicons = load_category_lexicon_file([
            "a\tzeta", "b\talpha", "c\tzeta",
        ])
        assert [lex.category_name for lex in lexicons] == ["zeta", "alpha"]

    def test_missing_tab_is_error(self):
        with pytest.raises(LexiconParseError, match="line 1"):
            load_category_lexicon_file(["thank gratitude"])

    def test_empty_term_is_error(self):
        with pytest.raises(LexiconParseError):
            load_category_lexicon_file(["*\tgratitude"])

    def test_match_prefix(self):
        lex = CategoryLexicon("x", frozenset(), frozenset({"applau"}))
        assert match_token(lex, "applause")
        assert match_token(lex, "applauding")
        assert not match_token(lex, "appl")

    def test_non_prefix_does_not_match(self):
        lex = CategoryLexicon("x", frozenset(), frozenset({"thank"}))
        assert not match_token(lex, "tank")

    def test_exact_terms_never_prefix_match(self):
        lex = CategoryLexicon("x", frozenset({"but"}), frozenset())
        assert match_token(lex, "but")
        assert not match_token(lex, "butter")

    @given(
        prefix=st.text(alphabet="abcdef", min_size=1, max_size=5),
        extension=st.text(alphabet="abcdef", max_size=6),
    )
    @settings(max_examples=80, deadline=None)
    def test_prefix_match_extends(self, prefix, extension):
        lex = CategoryLexicon("x", frozenset(), frozenset({prefix}))
        assert match_token(lex, prefix + extension)


class TestEmotionLexicon:
    def test_flag_one_stored(self):
        lex = load_emotion_lexicon(["abandon\tfear\t1"])
        assert "fear" in lex.categories_of("abandon")

    def test_flag_zero_ignored(self):
        lex = load_emotion_lexicon(["abandon\tjoy\t0"])
        assert lex.categories_of("abandon") == frozenset()

    def test_unknown_category_is_error(self):
        with pytest.raises(LexiconParseError, match="line 1"):
            load_emotion_lexicon(["abandon\tconfusion\t1"])

    def test_bad_flag_is_error(self):
        with pytest.raises(LexiconParseError):
            load_emotion_lexicon(["abandon\tfear\t2"])

    def test_starter_happy_categories(self, bundle):
        assert bundle.emotions.categories_of("happy") == {"joy", "positive"}

    def test_starter_abandon_has_fear(self, bundle):
        assert "fear" in bundle.emotions.categories_of("abandon")


class TestNameSet:
    def test_plain_lines(self):
        names = load_name_set(["Alex", "Daniel"])
        assert names.names == {"alex", "daniel"}

    def test_dedup_and_case(self):
        names = load_name_set(["MARY", "mary", "Mary"])
        assert names.names == {"mary"}

    def test_multi_token_line_is_error(self):
        with pytest.raises(LexiconParseError, match="line 1"):
            load_name_set(["Mary Jane"])

    def test_csv_rows_with_cutoff(self):
        rows = ["Mary,F,70000", "Zelmo,M,5"]
        assert load_name_set(rows, min_count=100).names == {"mary"}
        assert load_name_set(rows).names == {"mary", "zelmo"}

    def test_bundled_names_include_creators_example(self, bundle):
        assert "alex" in bundle.names
        assert "daniel" in bundle.names


class TestBundle:
    def test_default_pattern_prefixes(self, bundle):
        assert bundle.gratitude_prefixes == (
            "grateful", "gratitud", "thank", "appreciate", "bless",
        )
        assert bundle.applause_prefixes == ("applau",)

    def test_reload_is_structurally_identical(self, config):
        from ovation.pipeline import load_resources

        first, _ = load_resources(config)
        second, _ = load_resources(config)
        assert first == second
