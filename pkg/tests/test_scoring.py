"""Relative tweet scores, ranking and top-x labeling."""

import numpy as np
import pytest

from doswatch.corpus import Corpus, Label, Tweet, WindowTag
from doswatch.divergence import TopicScore, rank_attack_topics
from doswatch.lda import LdaHyperparams, train
from doswatch.scoring import label_top_x, rank_tweets, tweet_score


def scores_from(skls):
    return [TopicScore(topic_index=i, skl=s, matched_baseline_index=0)
            for i, s in enumerate(skls)]


def make_corpus(token_lists):
    tweets = tuple(
        Tweet(id=f"t{i}", raw_text=" ".join(toks), tokens=tuple(toks), label=Label.UNLABELED)
        for i, toks in enumerate(token_lists)
    )
    return Corpus(tweets=tweets, window_tag=WindowTag.EVENT)


class TestTweetScore:
    def test_dot_product(self):
        assert tweet_score([0.5, 0.5], scores_from([2.0, 0.0])) == pytest.approx(1.0)

    def test_mass_on_zero_topic(self):
        assert tweet_score([0.0, 1.0], scores_from([2.0, 0.0])) == 0.0

    def test_constant_skl_gives_constant_score(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            mix = rng.dirichlet(np.ones(4))
            assert tweet_score(mix, scores_from([3.5] * 4)) == pytest.approx(3.5)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            tweet_score([1.0], scores_from([1.0, 2.0]))

    def test_ranking_order_used_not_sort_order(self):
        # scores arrive sorted by skl, not by topic index; the dot product
        # must still line up mix[j] with topic j
        topic_scores = [
            TopicScore(topic_index=1, skl=5.0, matched_baseline_index=0),
            TopicScore(topic_index=0, skl=1.0, matched_baseline_index=0),
        ]
        assert tweet_score([1.0, 0.0], topic_scores) == pytest.approx(1.0)
        assert tweet_score([0.0, 1.0], topic_scores) == pytest.approx(5.0)

    def test_linearity_in_skl(self):
        rng = np.random.default_rng(2)
        mix = rng.dirichlet(np.ones(3))
        skls = [4.0, 1.0, 0.5]
        base = tweet_score(mix, scores_from(skls))
        for a in (0.0, 0.5, 2.0, 10.0):
            scaled = tweet_score(mix, scores_from([a * s for s in skls]))
            assert scaled == pytest.approx(a * base, abs=1e-12)


@pytest.fixture(scope="module")
def trained_setup():
    """Event model over two vocab islands plus the matching topic scores."""
    background = [f"bg{i}" for i in range(6)]
    attack = [f"atk{i}" for i in range(4)]
    rng = np.random.default_rng(10)
    baseline_docs = [[background[j] for j in rng.integers(0, 6, 8)] for _ in range(40)]
    event_docs = [[background[j] for j in rng.integers(0, 6, 8)] for _ in range(40)]
    event_docs += [[attack[j] for j in rng.integers(0, 4, 8)] for _ in range(1)]
    baseline = make_corpus(baseline_docs)
    event = make_corpus(event_docs)
    hyper = LdaHyperparams(num_topics=4, dirichlet_alpha=0.5, iterations=300, seed=6)
    model_b = train(baseline, hyper)
    model_a = train(event, hyper)
    return event, model_a, rank_attack_topics(model_a, model_b)


class TestRankTweets:
    def test_attack_tweet_ranks_first(self, trained_setup):
        event, model_a, topic_scores = trained_setup
        ranked = rank_tweets(event, model_a, topic_scores, seed=3)
        assert ranked[0].tweet.id == "t40"  # the lone attack-vocab tweet
        assert len(ranked) == len(event)
        assert [rt.rank for rt in ranked] == list(range(1, len(event) + 1))

    def test_scores_match_mix_dot_skl(self, trained_setup):
        event, model_a, topic_scores = trained_setup
        ranked = rank_tweets(event, model_a, topic_scores, seed=3)
        for rt in ranked[:10]:
            assert rt.score == pytest.approx(
                tweet_score(rt.topic_mix, topic_scores), abs=1e-9)

    def test_identical_tweets_tie_in_corpus_order(self, trained_setup):
        _, model_a, topic_scores = trained_setup
        corpus = make_corpus([["bg0", "bg1"]] * 5)
        ranked = rank_tweets(corpus, model_a, topic_scores, seed=1)
        assert [rt.tweet.id for rt in ranked] == [f"t{i}" for i in range(5)]
        assert len({rt.score for rt in ranked}) == 1

    def test_empty_tweet_scores_mean_skl(self, trained_setup):
        _, model_a, topic_scores = trained_setup
        corpus = make_corpus([["bg0"], []])
        ranked = rank_tweets(corpus, model_a, topic_scores, seed=1)
        empty = next(rt for rt in ranked if rt.tweet.id == "t1")
        mean_skl = np.mean([s.skl for s in topic_scores])
        assert empty.score == pytest.approx(mean_skl, abs=1e-9)

    def test_deterministic(self, trained_setup):
        event, model_a, topic_scores = trained_setup
        r1 = rank_tweets(event, model_a, topic_scores, seed=3)
        r2 = rank_tweets(event, model_a, topic_scores, seed=3)
        assert [(rt.tweet.id, rt.score) for rt in r1] == \
               [(rt.tweet.id, rt.score) for rt in r2]

    def test_shuffle_preserves_score_multiset(self, trained_setup):
        event, model_a, topic_scores = trained_setup
        rng = np.random.default_rng(8)
        docs = [list(t.tokens) for t in event]
        perm = rng.permutation(len(docs))
        shuffled = make_corpus([docs[i] for i in perm])
        r1 = rank_tweets(event, model_a, topic_scores, seed=3)
        r2 = rank_tweets(shuffled, model_a, topic_scores, seed=3)
        assert sorted(rt.score for rt in r1) == sorted(rt.score for rt in r2)

    def test_score_bounds(self, trained_setup):
        event, model_a, topic_scores = trained_setup
        max_skl = max(s.skl for s in topic_scores)
        for rt in rank_tweets(event, model_a, topic_scores, seed=3):
            assert 0.0 <= rt.score <= max_skl + 1e-12


class TestLabelTopX:
    def ranked(self, trained_setup, n=10):
        event, model_a, topic_scores = trained_setup
        return rank_tweets(event, model_a, topic_scores, seed=3)[:n]

    def test_zero(self, trained_setup):
        assert label_top_x(self.ranked(trained_setup), 0) == []

    def test_all(self, trained_setup):
        ranked = self.ranked(trained_setup)
        ids = label_top_x(ranked, len(ranked))
        assert ids == [rt.tweet.id for rt in ranked]

    def test_prefix_in_rank_order(self, trained_setup):
        ranked = self.ranked(trained_setup)
        assert label_top_x(ranked, 3) == [rt.tweet.id for rt in ranked[:3]]

    def test_too_large_x(self, trained_setup):
        ranked = self.ranked(trained_setup)
        with pytest.raises(ValueError):
            label_top_x(ranked, len(ranked) + 1)

    def test_negative_x(self, trained_setup):
        with pytest.raises(ValueError):
            label_top_x(self.ranked(trained_setup), -1)
