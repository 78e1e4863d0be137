//! Counting temporal logic and exact fixed-precision transformers.

pub mod fixedpoint;
pub mod formula;
pub mod transformer;
pub mod transforms;
pub mod languages;
pub mod compiler;
pub mod maj2;
pub mod equiv;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/formulas.md")]
    mod formulas {}
    #[doc = include_str!("../../../book/src/transformers.md")]
    mod transformers {}
    #[doc = include_str!("../../../book/src/compiling.md")]
    mod compiling {}
    #[doc = include_str!("../../../book/src/normal-forms.md")]
    mod normal_forms {}
    #[doc = include_str!("../../../book/src/majority.md")]
    mod majority {}
    #[doc = include_str!("../../../book/src/languages.md")]
    mod languages {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
