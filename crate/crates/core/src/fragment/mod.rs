//! The annotated English fragment: tokens, lexicon, grammar and
//! composition into terms.

mod compose;
mod grammar;
mod lexicon;
mod token;

pub use compose::{
    compose_tree, later_pronoun_targets, ComposeError, ComposeOptions, Composed, ProformClass,
    ProformUse,
};
pub use grammar::{parse_utterance, Label, ParseError, ParseTree};
pub use lexicon::{LexMode, Lexicon, LexiconError, WordClass, HOLE};
pub use token::{detokenize, tokenize, LexError, Token};

/// Looks up `tok` in the standard lexicon.
pub fn lex_lookup(tok: &Token, mode: LexMode) -> Result<crate::typelogic::Term, LexiconError> {
    Lexicon::standard().lookup(tok, mode)
}

pub mod templates {
    //! The lexical term templates, for direct use.
    pub use super::lexicon::{
        complement_noun, conditional, conjunction, control, dynamic_genitive, genitive, indefinite,
        infl, name, negation, one_place, pronoun, transitive,
    };
}
