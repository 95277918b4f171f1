import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rumourkit.dataset import ClassLabel, Tweet, UserMeta
from rumourkit.features import (
    BOOLEAN_SLOTS,
    N_FEATURES,
    SCHEMA_ID,
    LexiconError,
    default_lexicon_dir,
    extract_all,
    extract_content_features,
    extract_context_features,
    feature_matrix,
    load_lexicons,
    write_feature_csv,
)

from conftest import FIXTURES


def make_tweet(text: str, **kw) -> Tweet:
    defaults = dict(id="t", created_at=1420459200, is_retweet=False,
                    user=UserMeta(), label=ClassLabel.RUMOUR)
    defaults.update(kw)
    return Tweet(text=text, **defaults)


class TestGoldenCorpus:
    def test_every_golden_tweet_matches_expected_vector(
        self, golden_dataset, golden_expected, lexicons
    ):
        for tweet in golden_dataset:
            got = extract_all(tweet, lexicons).values.tolist()
            assert got == golden_expected[tweet.id], tweet.id

    def test_matrix_matches_rows_and_dtype(self, golden_dataset, golden_expected, lexicons):
        X = feature_matrix(golden_dataset, lexicons)
        assert X.shape == (20, N_FEATURES)
        assert X.dtype == np.int64
        for tweet, row in zip(golden_dataset, X):
            assert row.tolist() == golden_expected[tweet.id]

    def test_csv_export_is_byte_stable(self, golden_dataset, lexicons, tmp_path):
        out = tmp_path / "features.csv"
        write_feature_csv(golden_dataset, lexicons, out)
        assert out.read_bytes() == (FIXTURES / "golden_features.csv").read_bytes()


class TestDocumentedExamples:
    """Two fully hand-counted vectors exercising most slots at once."""

    USER = UserMeta(verified=False, has_description=True, has_url=False,
                    followers_count=10, friends_count=5, statuses_count=7)

    def test_alarmed_report_example(self, lexicons):
        tweet = Tweet(
            id="ex1",
            text="OMG!! Explosion at #WhiteHouse http://t.co/x @CNN :(",
            created_at=1420459200,  # Monday
            is_retweet=False,
            user=self.USER,
            label=ClassLabel.RUMOUR,
        )
        assert extract_all(tweet, lexicons).values.tolist() == [
            0, 1, 0, 10, 5, 0, 1, 7, 0,
            1, 7, 52, 0, 1, 1, 1, 1, 0, 0, 0,
            9, 0, 2, 1, 0, 1, 0, 1, -1, 0, 0, 0, 0,
            71, 1, 0, 0, 1, 1,
        ]

    def test_hedged_opinion_example(self, lexicons):
        tweet = Tweet(
            id="ex2",
            text="i think maybe they will win today",
            created_at=1420459200,  # Monday
            is_retweet=False,
            user=self.USER,
            label=ClassLabel.NON_RUMOUR,
        )
        assert extract_all(tweet, lexicons).values.tolist() == [
            0, 1, 0, 10, 5, 0, 1, 7, 0,
            0, 7, 33, 0, 0, 0, 0, 0, 0, 0, 0,
            0, 0, 0, 0, 0, 0, 1, 0, 1, 1, 0, 1, 1,
            57, 0, 0, 0, 0, 0,
        ]


class TestSlotBehaviour:
    def test_empty_text_zeroes_content_slots(self, lexicons):
        vec = extract_content_features(make_tweet(""), lexicons)
        assert vec.tolist() == [0] * 30

    def test_density_rounds_half_away_from_zero(self, lexicons):
        # 1 content word of 8 -> 12.5 -> 13
        vec = extract_all(make_tweet("the of and to in a is win"), lexicons)
        assert vec[33] == 13

    def test_density_floor_below_half(self, lexicons):
        # 3 content of 6 -> exactly 50
        vec = extract_all(make_tweet("I lost my job today :("), lexicons)
        assert vec[33] == 50

    def test_first_alpha_skips_symbols(self, lexicons):
        assert extract_all(make_tweet("$AAPL up"), lexicons)[38] == 1
        assert extract_all(make_tweet("#earthquake now"), lexicons)[38] == 0
        assert extract_all(make_tweet("1234"), lexicons)[38] == 0

    def test_repeated_chars_need_three(self, lexicons):
        assert extract_all(make_tweet("wow!!!"), lexicons)[36] == 1
        assert extract_all(make_tweet("wow!!"), lexicons)[36] == 0
        assert extract_all(make_tweet("soooo tired"), lexicons)[36] == 1

    def test_multi_punct_pairs(self, lexicons):
        assert extract_all(make_tweet("what?!"), lexicons)[23] == 1
        assert extract_all(make_tweet("what? really!"), lexicons)[23] == 0

    def test_caps_word_requires_two_letters(self, lexicons):
        assert extract_all(make_tweet("go LAX go"), lexicons)[37] == 1
        assert extract_all(make_tweet("I am here"), lexicons)[37] == 0

    def test_uppercase_letter_count(self, lexicons):
        assert extract_all(make_tweet("McDonald QQ"), lexicons)[20] == 4

    def test_hashtag_entities_win_over_regex(self, lexicons):
        with_entity = make_tweet("#a #b #c", hashtags=("a",))
        without = make_tweet("#a #b #c")
        assert extract_all(with_entity, lexicons)[9] == 1
        assert extract_all(without, lexicons)[9] == 3

    def test_domain_match_includes_subdomains(self, lexicons):
        tw = make_tweet("x", urls=("http://media.flickr.com/a.jpg",))
        assert extract_all(tw, lexicons)[12] == 1
        tw2 = make_tweet("x", urls=("http://notflickr.com/a",))
        assert extract_all(tw2, lexicons)[12] == 0

    def test_weekday_slot(self, lexicons):
        monday = make_tweet("x", created_at=1420459200)
        saturday = make_tweet("x", created_at=1420891200)
        assert extract_context_features(monday)[6] == 1
        assert extract_context_features(saturday)[6] == 0

    def test_followers_strictly_above_500(self, lexicons):
        at = make_tweet("x", user=UserMeta(followers_count=500))
        above = make_tweet("x", user=UserMeta(followers_count=501))
        assert extract_context_features(at)[5] == 0
        assert extract_context_features(above)[5] == 1


TEXT_ALPHABET = st.text(
    alphabet=st.sampled_from(list("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
                                  "0123456789 .,!?#@:/$()'\"-éü\U0001F600")),
    max_size=120,
)


class TestProperties:
    @settings(max_examples=200, deadline=None)
    @given(text=TEXT_ALPHABET)
    def test_sentiment_identity(self, text, lexicons):
        vec = extract_all(make_tweet(text), lexicons)
        assert vec[28] == vec[26] - vec[27]

    @settings(max_examples=100, deadline=None)
    @given(text=TEXT_ALPHABET)
    def test_boolean_slots_are_binary(self, text, lexicons):
        vec = extract_all(make_tweet(text), lexicons)
        for slot in BOOLEAN_SLOTS:
            assert vec[slot] in (0, 1), f"slot {slot} = {vec[slot]}"

    @settings(max_examples=100, deadline=None)
    @given(text=TEXT_ALPHABET)
    def test_counts_nonnegative_except_sentiment(self, text, lexicons):
        vec = extract_all(make_tweet(text), lexicons)
        for slot in range(N_FEATURES):
            if slot != 28:
                assert vec[slot] >= 0

    @settings(max_examples=60, deadline=None)
    @given(text=TEXT_ALPHABET)
    def test_density_is_a_percentage(self, text, lexicons):
        vec = extract_all(make_tweet(text), lexicons)
        assert 0 <= vec[33] <= 100


class TestLexiconLoading:
    def test_default_directory_is_complete(self):
        lex = load_lexicons(default_lexicon_dir())
        assert len(lex.positive_words) == 119
        assert len(lex.negative_words) == 254
        assert len(lex.stop_words) == 151
        assert len(lex.top_domains) == 104
        assert len(lex.smile_patterns) == 17
        assert len(lex.frown_patterns) == 9

    def test_missing_file_raises(self, tmp_path):
        with pytest.raises(LexiconError):
            load_lexicons(tmp_path)

    def test_schema_id(self):
        assert SCHEMA_ID == "f39.v1"
        assert N_FEATURES == 39
