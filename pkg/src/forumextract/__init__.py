"""Forum post extraction: locate the repeating post region of an HTML page
via path scoring, extract each post's text plus author/date/permalink
metadata, and score extraction output against gold-standard corpora."""

from .dom import (
    Document,
    Node,
    NodePath,
    RenderedPage,
    TextLine,
    ancestors_blacklisted,
    count_matching,
    descendants_blacklisted,
    element_text,
    node_path,
    parse_html,
    render_text,
    resolve,
    subtree_text,
)
from .errors import (
    CorpusEmptyError,
    EncodingError,
    ForumExtractError,
    MetadataNotFound,
    MissingGoldError,
    NoPostsFound,
    PathResolutionError,
    UrlError,
)
from .evaluate import (
    GoldDocument,
    GoldPost,
    MetricReport,
    PairScore,
    TokenSet,
    aggregate,
    jaccard,
    levenshtein_norm,
    load_gold_corpus,
    score_document,
    score_metadata,
    token_prf,
)
from .locator import (
    DEFAULT_TAG_BLACKLIST,
    CandidatePath,
    LocatorConfig,
    VsmVector,
    build_vsm,
    cosine_similarity,
    locate_post_path,
    score_xpath,
    tokenize,
)
from .metadata import (
    EPOCH_FLOOR,
    DateCandidate,
    LinkCandidate,
    UserCandidate,
    extract_dates,
    extract_post_links,
    extract_users,
)
from .pipeline import Diagnostic, ExtractionResult, ForumPost, extract

__version__ = "0.1.0"
