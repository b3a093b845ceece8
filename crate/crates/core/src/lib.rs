//! Aligning AMR graphs to the spans of their sentences.
//!
//! The pipeline segments each sentence into spans, pre-aligns what simple
//! rules can decide, then greedily decodes subgraph, relation and
//! reentrancy alignments under models trained with hard EM.

pub mod alignment;
pub mod amr;
pub mod corpus;
pub mod decode;
pub mod error;
pub mod eval;
pub mod model;
pub mod rules;
pub mod sentence;
pub mod state;
pub mod train;

pub use alignment::{read_alignments, write_alignments, AlignmentSet, EdgeTriple, ReentrancyType};
pub use amr::{parse_penman, serialize_penman, AmrGraph, EdgeId, NodeId};
pub use corpus::{join_corpus, load_corpus, Instance};
pub use decode::align_instance;
pub use error::{Error, Result};
pub use eval::{evaluate, EvalReport, Layer};
pub use model::{load_model, save_model, Hyperparams, ModelParams, Phase};
pub use rules::rules_only;
pub use sentence::{AnnotatedSentence, MweLexicon, Span};
pub use state::{AlignmentState, Provenance};
pub use train::{train, TrainConfig, TrainOutcome};
