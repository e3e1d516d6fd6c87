#include <set>

#include <gtest/gtest.h>

#include "censorlens/corpus.hpp"
#include "censorlens/error.hpp"
#include "censorlens/image.hpp"
#include "fixtures.hpp"

using namespace censorlens;
using namespace censorlens::corpus;

namespace {

const char* kCensored =
    R"({"id":"a","user_id":"u1","text":"hello","image_refs":["img1"],"created_at":"2015-01-01T00:00:00Z",)"
    R"("deleted_at":"2015-01-01T01:30:00Z","deletion_message":"Permission Denied","repost_count":3,"comment_count":1})";
const char* kLive =
    R"({"id":"b","text":"world","created_at":"2015-01-02T00:00:00Z","repost_count":0,"comment_count":0})";
const char* kVoluntary =
    R"({"id":"c","text":"bye","created_at":"2015-01-03T00:00:00Z","deleted_at":"2015-01-03T00:10:00Z",)"
    R"("deletion_message":"weibo does not exist","repost_count":0,"comment_count":0})";

}  // namespace

TEST(Corpus, ParsesValidRecord) {
  const auto p = parse_post_record(kCensored);
  EXPECT_EQ(p.id, "a");
  EXPECT_EQ(p.image_refs, std::vector<std::string>{"img1"});
  EXPECT_EQ(p.repost_count, 3);
  EXPECT_EQ(status_of(p), CensorshipStatus::Censored);
  EXPECT_DOUBLE_EQ(*lifetime_minutes(p), 90.0);
}

TEST(Corpus, RecordRoundTrip) {
  const auto p = parse_post_record(kCensored);
  const auto q = parse_post_record(to_record_line(p));
  EXPECT_EQ(q.id, p.id);
  EXPECT_EQ(q.created_at, p.created_at);
  EXPECT_EQ(q.deleted_at, p.deleted_at);
  EXPECT_EQ(q.deletion_message, p.deletion_message);
  EXPECT_EQ(q.text, p.text);
}

TEST(Corpus, RejectsInvariantViolations) {
  EXPECT_THROW(parse_post_record("{not json"), InvalidArgument);
  EXPECT_THROW(parse_post_record(R"({"text":"x","created_at":"2015-01-01T00:00:00Z","repost_count":0,"comment_count":0})"),
               InvalidArgument);
  // Deleted before created.
  EXPECT_THROW(parse_post_record(R"({"id":"x","text":"t","created_at":"2015-01-02T00:00:00Z",)"
                                 R"("deleted_at":"2015-01-01T00:00:00Z","repost_count":0,"comment_count":0})"),
               InvalidArgument);
  // Message without deletion time.
  EXPECT_THROW(parse_post_record(R"({"id":"x","text":"t","created_at":"2015-01-02T00:00:00Z",)"
                                 R"("deletion_message":"permission denied","repost_count":0,"comment_count":0})"),
               InvalidArgument);
  // Neither text nor images.
  EXPECT_THROW(parse_post_record(R"({"id":"x","created_at":"2015-01-02T00:00:00Z","repost_count":0,"comment_count":0})"),
               InvalidArgument);
  EXPECT_THROW(parse_post_record(R"({"id":"x","text":"t","created_at":"2015-01-02T00:00:00Z","repost_count":-1,"comment_count":0})"),
               InvalidArgument);
}

TEST(Corpus, DeletionMessagesMapToStatus) {
  EXPECT_EQ(classify_deletion("permission denied", true), CensorshipStatus::Censored);
  EXPECT_EQ(classify_deletion("  PERMISSION   denied ", true), CensorshipStatus::Censored);
  EXPECT_EQ(classify_deletion("Weibo does not exist", true), CensorshipStatus::VoluntaryOrUnknown);
  EXPECT_EQ(classify_deletion("something else", true), CensorshipStatus::VoluntaryOrUnknown);
  EXPECT_EQ(classify_deletion(std::nullopt, false), CensorshipStatus::Live);
  DeletionClassifier c;
  const auto r = c.classify("server says no", true);
  EXPECT_EQ(r.status, CensorshipStatus::VoluntaryOrUnknown);
  EXPECT_TRUE(r.warning);
  c.add_alias("server says no", CensorshipStatus::Censored);
  EXPECT_EQ(c.classify("Server says NO", true).status, CensorshipStatus::Censored);
}

TEST(Corpus, LoadCollectsErrorsAndMissingImages) {
  fixture::TempDir tmp("corpus");
  std::filesystem::create_directories(tmp / "images");
  save_image(tmp / "images/img1.png", Image(2, 2, 10));
  fixture::write_text(tmp / "posts.jsonl", std::string(kCensored) + "\n\n" + kLive + "\n{broken\n" + kVoluntary +
                                               "\n" +
                                               R"({"id":"d","text":"t","image_refs":["ghost"],"created_at":"2015-01-04T00:00:00Z","repost_count":0,"comment_count":0})" +
                                               "\n");
  const auto r = load_posts(tmp / "posts.jsonl", tmp / "images");
  EXPECT_EQ(r.corpus.posts.size(), 4u);
  ASSERT_EQ(r.errors.size(), 1u);
  EXPECT_EQ(r.errors[0].line_no, 4u);
  EXPECT_EQ(r.records, r.corpus.posts.size() + r.errors.size());
  EXPECT_EQ(r.corpus.missing_images, std::set<std::string>{"ghost"});
  EXPECT_TRUE(r.corpus.image_store.contains("img1"));
  EXPECT_EQ(format_iso8601(r.corpus.window_start), "2015-01-01T00:00:00Z");
  EXPECT_EQ(format_iso8601(r.corpus.window_end), "2015-01-04T00:00:00Z");
  EXPECT_NE(r.corpus.find("b"), nullptr);
  EXPECT_EQ(r.corpus.find("zzz"), nullptr);
  EXPECT_THROW(load_posts(tmp / "nope.jsonl", tmp / "images"), IoError);
}

TEST(Corpus, DuplicateIdsAndOutOfWindowPostsAreRecordErrors) {
  fixture::TempDir tmp("corpus_dup");
  std::filesystem::create_directories(tmp / "images");
  fixture::write_text(tmp / "posts.jsonl", std::string(kLive) + "\n" + kLive + "\n" + kVoluntary + "\n");
  LoadOptions opts;
  opts.window_end = parse_iso8601("2015-01-02T12:00:00Z");
  const auto r = load_posts(tmp / "posts.jsonl", tmp / "images", opts);
  EXPECT_EQ(r.corpus.posts.size(), 1u);
  EXPECT_EQ(r.errors.size(), 2u);
}

TEST(Corpus, SampleUncensoredIsSeededSubsetOfLivePosts) {
  Corpus c;
  for (int i = 0; i < 50; ++i) {
    auto p = parse_post_record(kLive);
    p.id = "p" + std::to_string(i);
    if (i % 5 == 0) {
      p.deleted_at = p.created_at + std::chrono::minutes(5);
      p.deletion_message = "permission denied";
    }
    c.posts.push_back(p);
  }
  const auto a = sample_uncensored(c, 10, 3);
  const auto b = sample_uncensored(c, 10, 3);
  ASSERT_EQ(a.size(), 10u);
  std::set<std::string> ids;
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].id, b[i].id);
    EXPECT_EQ(status_of(a[i]), CensorshipStatus::Live);
    ids.insert(a[i].id);
  }
  EXPECT_EQ(ids.size(), 10u);
  EXPECT_THROW(sample_uncensored(c, 41, 3), InvalidArgument);
}

TEST(Corpus, PartitionByKeywordsAllowsOverlapAndNormalizes) {
  Corpus c;
  auto p = parse_post_record(kLive);
  p.id = "x";
  p.text = "Café fire and protest";
  c.posts.push_back(p);
  p.id = "y";
  p.text = "nothing here";
  c.posts.push_back(p);
  const auto parts = partition_by_keywords(
      c, {{Category::Fire, {"fire"}}, {Category::Protest, {"protest"}}, {Category::Rainstorm, {"CAFe\xCC\x81"}}});
  EXPECT_EQ(parts.at(Category::Fire), std::vector<std::string>{"x"});
  EXPECT_EQ(parts.at(Category::Protest), std::vector<std::string>{"x"});
  EXPECT_EQ(parts.at(Category::Rainstorm), std::vector<std::string>{"x"});
  EXPECT_THROW(partition_by_keywords(c, {{Category::Fire, {}}}), InvalidArgument);
}
