use sociolex::lexicon::{expansion_round, merge_review, parse_review, write_review};
use sociolex::{EmbeddingTableF32, FineCategory};

use crate::args::{ExpandArgs, MergeArgs};
use crate::error::CliError;
use crate::{read, write_output, Context};

pub(crate) fn expand_lexicon(ctx: &Context, args: ExpandArgs) -> Result<(), CliError> {
    let (lex, _) = ctx.lexicon()?;
    let emb = EmbeddingTableF32::load(&args.embeddings)?;
    let cats: Vec<FineCategory> = if args.category.is_empty() {
        lex.inclusion.keys().copied().collect()
    } else {
        args.category
            .iter()
            .map(|n| n.parse().map_err(|_| CliError::Usage(format!("unknown category {n:?}"))))
            .collect::<Result<_, _>>()?
    };
    let mut candidates = Vec::new();
    for c in cats {
        let round = expansion_round(&lex, c, &emb, args.top_k)?;
        log::info!("{c}: {} candidates", round.len());
        candidates.extend(round);
    }
    write_output(args.output.as_deref(), &write_review(&candidates))
}

pub(crate) fn merge_lexicon(ctx: &Context, args: MergeArgs) -> Result<(), CliError> {
    let (mut lex, _) = ctx.lexicon()?;
    let rows = parse_review(&read(&args.review)?)?;
    let added = merge_review(&mut lex, &rows)?;
    log::info!("{added} phrases added");
    write_output(args.output.as_deref(), &lex.to_inclusion_tsv())
}
